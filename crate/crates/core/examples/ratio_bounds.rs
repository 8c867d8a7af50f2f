//! Where the optimal ratio f_m / f_1 falls inside its provable interval, for
//! growing memory intensity.

use memdvfs::model::{DeadlineProblem, ParallelismVector, Platform, PlatformParams};
use memdvfs::optimizer::{ratio_bounds, solve_constrained};

fn main() -> memdvfs::Result<()> {
    let chip = Platform::new(PlatformParams {
        c1: 1.0e-27,
        c2: 0.0,
        c3: 0.0,
        alpha: 3.0,
        k: 0.0,
        cores: 8,
        t_a: 1.0e-7,
    })?;
    let w = ParallelismVector::new(vec![2.0e9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0e9])?;
    let b = ratio_bounds(&chip, 8, 1)?;
    println!("f_8 / f_1 must lie in [{:.4}, {:.4}] (dynamic energy only)", b.lower, b.upper_dynamic);
    println!("{:>8}  {:>10}", "d", "f_8 / f_1");
    for d in [0.0, 1e-4, 1e-3, 1e-2, 1e-1, 1.0] {
        let floor = w.total_cycles() * d * chip.t_a();
        let r = solve_constrained(&DeadlineProblem::new(chip, w.clone(), d, floor + 4.0)?)?;
        let ratio = r.f.get(8).unwrap() / r.f.get(1).unwrap();
        println!("{:>8.0e}  {:>10.6}", d, ratio);
    }
    Ok(())
}
