//! With alpha = 2 the optimal ratio x_m = f_m / f_1 solves a cubic in the
//! memory overload g = 2 d t_a f_1. It rises quickly for g < 1 and then
//! flattens toward its cubic-root limit.

use memdvfs::model::{Platform, PlatformParams};
use memdvfs::optimizer::{overload_limits, sweep_ratio_vs_overload};

fn main() -> memdvfs::Result<()> {
    let chip = Platform::new(PlatformParams {
        c1: 1.0e-18,
        c2: 0.0,
        c3: 0.0,
        alpha: 2.0,
        k: 0.0,
        cores: 8,
        t_a: 1.0e-7,
    })?;
    let g: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0].to_vec();
    print!("{:>6}", "g");
    for m in [2, 4, 8] {
        print!("  {:>8}", format!("x_{m}"));
    }
    println!();
    let columns = [2, 4, 8]
        .iter()
        .map(|&m| sweep_ratio_vs_overload(&chip, m, &g))
        .collect::<memdvfs::Result<Vec<_>>>()?;
    for (i, gi) in g.iter().enumerate() {
        print!("{gi:>6}");
        for col in &columns {
            print!("  {:>8.5}", col[i].x_m);
        }
        println!();
    }
    for m in [2, 4, 8] {
        let lim = overload_limits(&chip, m)?;
        println!("m = {m}: from {:.5} toward {:.5}", lim.quadratic, lim.cubic);
    }
    Ok(())
}
