//! Rank list-scheduling policies by the energy-aware criterion
//! S_bar / (T - S d t_a) and show that the ranking follows energy.

use memdvfs::model::{Platform, PlatformParams, TaskGraph};
use memdvfs::scheduler::{rank_schedules, Policy};

fn main() -> memdvfs::Result<()> {
    let chip = Platform::new(PlatformParams {
        c1: 1.0e-27,
        c2: 0.0,
        c3: 0.0,
        alpha: 3.0,
        k: 0.1,
        cores: 4,
        t_a: 1.0e-7,
    })?;
    let graph = TaskGraph::from_parts(
        &[
            ("decode", 3_000_000_000),
            ("filter", 3_000_000_000),
            ("encode", 3_000_000_000),
            ("audit-1", 1_000_000_000),
            ("audit-2", 1_000_000_000),
            ("audit-3", 1_000_000_000),
            ("audit-4", 1_000_000_000),
            ("audit-5", 1_000_000_000),
        ],
        &[("decode", "filter"), ("filter", "encode")],
        0.002,
    )?;

    let ranked = rank_schedules(&graph, &chip, 40.0, &Policy::ALL)?;
    println!("{:<14} {:>10} {:>12} {:>14} {:>12}", "policy", "S [Gcyc]", "S_bar [Gcyc]", "criterion [GHz]", "dyn E [J]");
    for r in &ranked {
        println!(
            "{:<14} {:>10.3} {:>12.3} {:>14.4} {:>12.4}",
            r.policy.name(),
            r.metrics.makespan / 1e9,
            r.metrics.weighted_makespan / 1e9,
            r.metrics.criterion / 1e9,
            r.result.energy.dynamic()
        );
    }
    for p in &ranked[0].schedule.placements()[..3] {
        println!("core {} runs [{}, {})", p.core, p.start, p.end);
    }
    Ok(())
}
