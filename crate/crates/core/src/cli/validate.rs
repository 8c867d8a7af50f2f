use std::fmt::Write as _;
use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{CliError, ValidateArgs};
use crate::error::Result;
use crate::model::{DeadlineProblem, ParallelismVector, Platform, PlatformParams, Task, TaskGraph};
use crate::optimizer::{ratio_bounds, ratio_relation_residual, solve_constrained, OptimizationResult};
use crate::oracle::{enumerate_schedules, grid_minimize_energy, GridSpec};
use crate::scheduler::{metrics_for, parallelism_vector};

const BOUND_SLACK: f64 = 1e-8;
const RELATION_TOL: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-3;
const ORACLE_POINTS: usize = 100;
const CRITERION_TOL: f64 = 1e-9;

const SUITES: [&str; 4] = ["oracle", "ratio-bounds", "ratio-relation", "criterion"];

/// Aggregate over all instances of one property suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// Largest observed deviation (suite-specific units, all relative).
    pub worst: f64,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub instances: usize,
    pub suites: Vec<SuiteSummary>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "validate seed={} instances={}", self.seed, self.instances);
        let _ = writeln!(s, "{:<16}{:>9}{:>8}  worst", "suite", "checked", "failed");
        for suite in &self.suites {
            let _ = writeln!(
                s,
                "{:<16}{:>9}{:>8}  {:.3e}",
                suite.name, suite.checked, suite.failed, suite.worst
            );
        }
        for suite in &self.suites {
            if let Some(msg) = &suite.first_failure {
                let _ = writeln!(s, "first {} failure: {msg}", suite.name);
            }
        }
        let _ = writeln!(s, "{}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

struct Check {
    deviation: f64,
    ok: bool,
    note: String,
}

impl Check {
    fn from_result(r: Result<(f64, bool, String)>) -> Self {
        match r {
            Ok((deviation, ok, note)) => Check { deviation, ok, note },
            Err(e) => Check {
                deviation: f64::INFINITY,
                ok: false,
                note: format!("error: {e}"),
            },
        }
    }
}

fn random_platform(rng: &mut ChaCha8Rng, cores: usize, dynamic_only: bool) -> Platform {
    let params = PlatformParams {
        c1: rng.gen_range(0.5..2.0),
        c2: if dynamic_only { 0.0 } else { rng.gen_range(0.0..1.0) },
        c3: if dynamic_only { 0.0 } else { rng.gen_range(0.0..2.0) },
        alpha: rng.gen_range(2.0..=3.0),
        k: rng.gen_range(0.0..0.5),
        cores,
        t_a: 1.0,
    };
    Platform::new(params).expect("sampled platform is valid")
}

/// Workload on `levels` distinct active-core counts out of `cores`.
fn random_workload(rng: &mut ChaCha8Rng, cores: usize, levels: usize) -> ParallelismVector {
    let mut w = vec![0.0; cores];
    let mut placed = 0;
    while placed < levels {
        let m = rng.gen_range(0..cores);
        if w[m] == 0.0 {
            w[m] = rng.gen_range(0.1..10.0);
            placed += 1;
        }
    }
    ParallelismVector::new(w).expect("sampled workload is valid")
}

fn random_problem(rng: &mut ChaCha8Rng, max_levels: usize) -> DeadlineProblem {
    let cores = rng.gen_range(2..=8);
    let platform = random_platform(rng, cores, false);
    let levels = rng.gen_range(1..=cores.min(max_levels));
    let w = random_workload(rng, cores, levels);
    let d = rng.gen_range(0.0..10.0);
    let floor = w.total_cycles() * d;
    let t = floor + w.total_cycles() * rng.gen_range(0.2..5.0);
    DeadlineProblem::new(platform, w, d, t).expect("sampled deadline is feasible")
}

/// Largest violation of the interval, relative to the interval scale.
fn bound_violation(ratio: f64, lower: f64, upper: f64) -> f64 {
    (lower - ratio).max(ratio - upper).max(0.0)
}

fn active_pairs(result: &OptimizationResult) -> Vec<(usize, f64, usize, f64)> {
    let active: Vec<(usize, f64)> = result
        .f
        .as_slice()
        .iter()
        .enumerate()
        .filter_map(|(i, f)| f.map(|f| (i + 1, f)))
        .collect();
    let mut pairs = Vec::new();
    for (i, &(n, f_n)) in active.iter().enumerate() {
        for &(m, f_m) in &active[i + 1..] {
            pairs.push((m, f_m, n, f_n));
        }
    }
    pairs
}

fn check_bounds(problem: &DeadlineProblem) -> Result<(f64, bool, String)> {
    let total = solve_constrained(problem)?;
    let dynamic_problem = problem.dynamic_only();
    let dynamic = solve_constrained(&dynamic_problem)?;
    let platform = problem.platform();
    let mut worst: f64 = 0.0;
    let mut note = String::new();
    for (result, is_dynamic) in [(&total, false), (&dynamic, true)] {
        for (m, f_m, n, f_n) in active_pairs(result) {
            let b = ratio_bounds(platform, m, n)?;
            let upper = if is_dynamic { b.upper_dynamic } else { b.upper_total };
            let v = bound_violation(f_m / f_n, b.lower, upper);
            if v > worst {
                worst = v;
                note = format!(
                    "{} m={m} n={n} ratio={:.12e} bounds=[{:.12e}, {:.12e}]",
                    if is_dynamic { "dynamic" } else { "total" },
                    f_m / f_n,
                    b.lower,
                    upper
                );
            }
        }
    }
    Ok((worst, worst <= BOUND_SLACK, note))
}

fn check_relation(problem: &DeadlineProblem) -> Result<(f64, bool, String)> {
    let dynamic_problem = problem.dynamic_only();
    let result = solve_constrained(&dynamic_problem)?;
    let mut worst: f64 = 0.0;
    let mut note = String::new();
    for (m, f_m, n, f_n) in active_pairs(&result) {
        let r = ratio_relation_residual(problem.platform(), problem.d(), m, n, f_m, f_n)?.abs();
        if r > worst {
            worst = r;
            note = format!("m={m} n={n} residual={r:.3e}");
        }
    }
    Ok((worst, worst < RELATION_TOL, note))
}

fn check_oracle(problem: &DeadlineProblem) -> Result<(f64, bool, String)> {
    let solved = solve_constrained(problem)?;
    let grid = GridSpec::new(1e-3, 1e2, ORACLE_POINTS)?;
    let (_, grid_energy) = grid_minimize_energy(problem, &grid)?;
    let gap = (grid_energy - solved.energy.total) / solved.energy.total;
    let ok = (-1e-9..ORACLE_TOL).contains(&gap);
    Ok((gap.abs(), ok, format!("solver={:.12e} grid={grid_energy:.12e}", solved.energy.total)))
}

fn random_graph(rng: &mut ChaCha8Rng) -> TaskGraph {
    let n = rng.gen_range(2..=6);
    let ids: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let tasks = ids.iter().map(|id| Task::new(id.clone(), rng.gen_range(1..10))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.3) {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let d = [0.0, 0.1, 1.0, 10.0][rng.gen_range(0..4)];
    TaskGraph::new(tasks, &edges, d).expect("sampled graph is a DAG")
}

fn check_criterion(rng: &mut ChaCha8Rng) -> Result<(f64, bool, String)> {
    let graph = random_graph(rng);
    let cores = rng.gen_range(2..=3);
    let mut platform = random_platform(rng, cores, true).params();
    platform.t_a = 0.1;
    let platform = Platform::new(platform)?;
    let work = graph.total_work() as f64;
    let t_budget = work * graph.d() * platform.t_a() + work * rng.gen_range(0.3..3.0);

    let mut rows = Vec::new();
    for schedule in enumerate_schedules(&graph, cores)? {
        let w = parallelism_vector(&schedule, &platform)?;
        let criterion = metrics_for(&w, &platform, graph.d(), t_budget)?.criterion;
        let problem = DeadlineProblem::new(platform, w, graph.d(), t_budget)?;
        rows.push((criterion, solve_constrained(&problem)?.energy.dynamic()));
    }
    let best_criterion = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let best_energy = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let chosen = rows
        .iter()
        .filter(|r| r.0 <= best_criterion * (1.0 + 1e-12))
        .map(|r| r.1)
        .fold(0.0, f64::max);
    let gap = chosen / best_energy - 1.0;
    Ok((
        gap,
        gap <= CRITERION_TOL,
        format!("{} schedules, criterion-minimal energy {chosen:.12e}, minimum {best_energy:.12e}", rows.len()),
    ))
}

fn run_instance(seed: u64, index: usize) -> [Check; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let oracle_problem = random_problem(&mut rng, 3);
    let problem = random_problem(&mut rng, 8);
    [
        Check::from_result(check_oracle(&oracle_problem)),
        Check::from_result(check_bounds(&problem)),
        Check::from_result(check_relation(&problem)),
        Check::from_result(check_criterion(&mut rng)),
    ]
}

/// Run every suite on `instances` random instances. The report depends only
/// on `(seed, instances)`.
pub fn validate(seed: u64, instances: usize) -> ValidationReport {
    let outcomes: Vec<[Check; 4]> = (0..instances).into_par_iter().map(|i| run_instance(seed, i)).collect();
    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(k, &name)| {
            let mut summary = SuiteSummary {
                name,
                checked: 0,
                failed: 0,
                worst: 0.0,
                first_failure: None,
            };
            for (i, checks) in outcomes.iter().enumerate() {
                let c = &checks[k];
                summary.checked += 1;
                summary.worst = summary.worst.max(c.deviation);
                if !c.ok {
                    summary.failed += 1;
                    summary.first_failure.get_or_insert_with(|| format!("instance {i}: {}", c.note));
                }
            }
            summary
        })
        .collect();
    ValidationReport { seed, instances, suites }
}

pub fn run(args: &ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let report = validate(args.seed, args.instances);
    out.write_all(report.render().as_bytes())?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::input("validation failed"))
    }
}
