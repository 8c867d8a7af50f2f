//! One scalar, the reference frequency f', fixes every level through
//! f_m = f' / m'^(1/(alpha+1)). Compared here with the exact solver on a
//! memory-bound and a compute-bound workload.

use memdvfs::model::{DeadlineProblem, ParallelismVector, Platform, PlatformParams};
use memdvfs::optimizer::{induced_assignment, reference_frequency_dynamic, reference_frequency_total, solve_constrained};

fn main() -> memdvfs::Result<()> {
    let params = PlatformParams {
        c1: 1.0e-27,
        c2: 0.0,
        c3: 0.0,
        alpha: 3.0,
        k: 0.1,
        cores: 4,
        t_a: 1.0e-7,
    };
    let chip = Platform::new(params)?;
    let w = ParallelismVector::new(vec![3.0e9, 1.0e9, 0.0, 4.0e9])?;

    for (label, d) in [("compute-bound", 1e-4), ("memory-bound", 10.0)] {
        let floor = w.total_cycles() * d * chip.t_a();
        let prob = DeadlineProblem::new(chip, w.clone(), d, floor + 8.0)?;
        let f_ref = reference_frequency_dynamic(&prob)?;
        let closed = prob.total_energy(&induced_assignment(&prob, f_ref)?)?.dynamic();
        let exact = solve_constrained(&prob)?.energy.dynamic();
        println!(
            "{label:>14}: f' = {f_ref:.4e} Hz, closed form {closed:.6e} J, exact {exact:.6e} J, excess {:.2e}",
            closed / exact - 1.0
        );
    }

    // with static power, f' is raised to the minimizer of total energy when
    // the deadline alone would allow a slower clock
    let chip = Platform::new(PlatformParams { c2: 1.0e-10, c3: 0.5, ..params })?;
    for t in [8.0, 30.0, 120.0] {
        let prob = DeadlineProblem::new(chip, w.clone(), 0.002, t)?;
        println!(
            "T = {t:>5} s: deadline-forced f' = {:.4e} Hz, total-energy f' = {:.4e} Hz",
            reference_frequency_dynamic(&prob)?,
            reference_frequency_total(&prob)?
        );
    }
    Ok(())
}
