//! Energy-optimal frequencies for one parallelism vector as the deadline
//! tightens: the loose end keeps the deadline-free optimum, the tight end
//! pays a growing multiplier.

use memdvfs::model::{DeadlineProblem, ParallelismVector, Platform, PlatformParams};
use memdvfs::optimizer::{solve_constrained, unconstrained_level_frequency};

fn main() -> memdvfs::Result<()> {
    let chip = Platform::new(PlatformParams {
        c1: 1.0e-27,
        c2: 1.0e-10,
        c3: 0.5,
        alpha: 3.0,
        k: 0.1,
        cores: 4,
        t_a: 1.0e-7,
    })?;
    // cycles spent with 1, 2, 3, 4 cores busy
    let w = ParallelismVector::new(vec![4.0e9, 1.0e9, 0.0, 6.0e9])?;
    let d = 0.002;

    for m in [1, 2, 4] {
        println!("deadline-free f_{m} = {:.4e} Hz", unconstrained_level_frequency(&chip, d, m)?);
    }
    println!();
    println!("{:>8}  {:>10}  {:>10}  {:>10}  {:>10}  {:>10}", "T [s]", "f_1", "f_2", "f_4", "E [J]", "lambda");
    for t in [40.0, 20.0, 12.0, 8.0, 6.0] {
        let r = solve_constrained(&DeadlineProblem::new(chip, w.clone(), d, t)?)?;
        let f = |m| r.f.get(m).map_or(f64::NAN, |f| f / 1e9);
        println!(
            "{:>8.1}  {:>10.4}  {:>10.4}  {:>10.4}  {:>10.4}  {:>10.4}",
            t,
            f(1),
            f(2),
            f(4),
            r.energy.total,
            r.dual_multiplier
        );
    }
    println!("(frequencies in GHz)");
    Ok(())
}
