//! Cross-check the analytical solver against brute force: a log-spaced
//! frequency grid for the energy, and exhaustive schedule enumeration for the
//! scheduling criterion.

use memdvfs::model::{DeadlineProblem, ParallelismVector, Platform, PlatformParams, TaskGraph};
use memdvfs::optimizer::solve_constrained;
use memdvfs::oracle::{enumerate_schedules, grid_minimize_energy, GridSpec};
use memdvfs::scheduler::{metrics_for, parallelism_vector};

fn main() -> memdvfs::Result<()> {
    let params = PlatformParams {
        c1: 1.0,
        c2: 0.1,
        c3: 0.6,
        alpha: 2.5,
        k: 0.2,
        cores: 3,
        t_a: 0.1,
    };
    let chip = Platform::new(params)?;
    let w = ParallelismVector::new(vec![2.0, 5.0, 3.0])?;
    let prob = DeadlineProblem::new(chip, w, 1.5, 12.0)?;
    let exact = solve_constrained(&prob)?;
    for points in [100, 200, 400] {
        let (_, e) = grid_minimize_energy(&prob, &GridSpec::new(1e-2, 1e2, points)?)?;
        println!("grid {points:>3} points: {e:.10}  (solver {:.10})", exact.energy.total);
    }

    let graph = TaskGraph::from_parts(
        &[("a", 2), ("b", 3), ("c", 1), ("d", 2), ("e", 4)],
        &[("a", "c"), ("b", "c"), ("c", "e")],
        1.5,
    )?;
    let dynamic = Platform::new(PlatformParams { c2: 0.0, c3: 0.0, ..params })?;
    let t = 8.0;
    println!("\n{:>12}  {:>10}  {:>10}", "w", "criterion", "dyn E");
    for s in enumerate_schedules(&graph, 3)? {
        let w = parallelism_vector(&s, &dynamic)?;
        let c = metrics_for(&w, &dynamic, graph.d(), t)?.criterion;
        let e = solve_constrained(&DeadlineProblem::new(dynamic, w.clone(), graph.d(), t)?)?.energy.dynamic();
        println!("{:>12}  {c:>10.5}  {e:>10.5}", format!("{:?}", w.as_slice()));
    }
    Ok(())
}
