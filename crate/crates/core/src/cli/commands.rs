use std::fs::File;
use std::io::{BufWriter, Write};

use serde::Serialize;

use super::files::{load_graph, load_platform};
use super::{CliError, OptimizeArgs, ScheduleArgs, SweepArgs};
use crate::model::{DeadlineProblem, EnergyBreakdown, ParallelismVector, Platform};
use crate::optimizer::{
    induced_assignment, overload_limits, reference_frequency_dynamic, solve_constrained_with,
    sweep_ratio_vs_overload, OptimizationResult, SolveOptions,
};
use crate::scheduler::{list_schedule, parallelism_vector, rank_schedules, Policy, RankedSchedule, ScheduleMetrics};

#[derive(Debug, Serialize)]
struct LevelRow {
    m: usize,
    cycles: f64,
    f: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ReferenceSolution {
    reference_frequency: f64,
    f: Vec<Option<f64>>,
    energy: EnergyBreakdown,
}

#[derive(Debug, Serialize)]
struct OptimizeReport {
    platform: Platform,
    policy: Option<Policy>,
    d: f64,
    t_budget: f64,
    memory_floor: f64,
    levels: Vec<LevelRow>,
    energy: EnergyBreakdown,
    time: f64,
    deadline_binding: bool,
    dual_multiplier: f64,
    dynamic_only: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<ReferenceSolution>,
}

fn level_rows(w: &ParallelismVector, result: &OptimizationResult) -> Vec<LevelRow> {
    (1..=w.len())
        .map(|m| LevelRow {
            m,
            cycles: w.get(m),
            f: result.f.get(m),
        })
        .collect()
}

fn fmt_freq(f: Option<f64>) -> String {
    f.map_or_else(|| "-".to_string(), |f| format!("{f:.8e}"))
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::input(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn write_energy(out: &mut dyn Write, e: &EnergyBreakdown) -> std::io::Result<()> {
    writeln!(out, "energy [J]")?;
    writeln!(out, "  memory dynamic       {:.8e}", e.memory_dynamic)?;
    writeln!(out, "  instruction dynamic  {:.8e}", e.instruction_dynamic)?;
    writeln!(out, "  static               {:.8e}", e.static_energy)?;
    writeln!(out, "  total                {:.8e}", e.total)
}

pub fn optimize(args: &OptimizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let platform = load_platform(&args.platform)?;
    let (w, d, policy) = match (&args.graph, &args.w) {
        (Some(path), _) => {
            let graph = load_graph(path)?;
            let schedule = list_schedule(&graph, &platform, args.policy)?;
            (parallelism_vector(&schedule, &platform)?, graph.d(), Some(args.policy))
        }
        (None, Some(w)) => {
            let d = args.d.ok_or_else(|| CliError::input("--w requires --d"))?;
            (ParallelismVector::new(w.clone())?, d, None)
        }
        (None, None) => return Err(CliError::input("either --graph or --w is required")),
    };

    let mut problem = DeadlineProblem::new(platform, w, d, args.t_budget)?;
    if args.dynamic_only {
        problem = problem.dynamic_only();
    }
    let result = solve_constrained_with(&problem, &SolveOptions { f_max: args.f_max })?;

    let reference = if args.dynamic_only {
        let f_ref = reference_frequency_dynamic(&problem)?;
        let f = induced_assignment(&problem, f_ref)?;
        Some(ReferenceSolution {
            reference_frequency: f_ref,
            energy: problem.total_energy(&f)?,
            f: f.as_slice().to_vec(),
        })
    } else {
        None
    };

    let report = OptimizeReport {
        platform: *problem.platform(),
        policy,
        d,
        t_budget: problem.t_budget(),
        memory_floor: problem.memory_floor(),
        levels: level_rows(problem.w(), &result),
        energy: result.energy,
        time: result.time,
        deadline_binding: result.deadline_binding,
        dual_multiplier: result.dual_multiplier,
        dynamic_only: args.dynamic_only,
        reference,
    };
    if args.json {
        return write_json(out, &report);
    }

    if let Some(p) = report.policy {
        writeln!(out, "schedule policy  {p}")?;
    }
    writeln!(out, "deadline         {:.8e} s", report.t_budget)?;
    writeln!(out, "memory floor     {:.8e} s", report.memory_floor)?;
    writeln!(out)?;
    match &report.reference {
        None => writeln!(out, "{:>5}  {:>15}  {:>15}", "m", "w_m [cycles]", "f_m [Hz]")?,
        Some(_) => writeln!(
            out,
            "{:>5}  {:>15}  {:>15}  {:>15}",
            "m", "w_m [cycles]", "f_m [Hz]", "closed form"
        )?,
    }
    for (i, row) in report.levels.iter().enumerate() {
        write!(out, "{:>5}  {:>15.8e}  {:>15}", row.m, row.cycles, fmt_freq(row.f))?;
        if let Some(r) = &report.reference {
            write!(out, "  {:>15}", fmt_freq(r.f[i]))?;
        }
        writeln!(out)?;
    }
    writeln!(out)?;
    write_energy(out, &report.energy)?;
    if let Some(r) = &report.reference {
        writeln!(out, "closed form")?;
        writeln!(out, "  reference f'         {:.8e} Hz", r.reference_frequency)?;
        writeln!(out, "  total                {:.8e}", r.energy.total)?;
    }
    writeln!(out)?;
    writeln!(out, "completion time  {:.8e} s", report.time)?;
    writeln!(out, "deadline binding {}", if report.deadline_binding { "yes" } else { "no" })?;
    writeln!(out, "lambda           {:.8e}", report.dual_multiplier)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ScheduleRow {
    policy: Policy,
    w: ParallelismVector,
    metrics: ScheduleMetrics,
    energy: EnergyBreakdown,
    f: Vec<Option<f64>>,
}

impl From<RankedSchedule> for ScheduleRow {
    fn from(r: RankedSchedule) -> Self {
        Self {
            policy: r.policy,
            w: r.w,
            metrics: r.metrics,
            energy: r.result.energy,
            f: r.result.f.as_slice().to_vec(),
        }
    }
}

pub fn schedule(args: &ScheduleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let platform = load_platform(&args.platform)?;
    let graph = load_graph(&args.graph)?;
    let rows: Vec<ScheduleRow> = if args.rank {
        rank_schedules(&graph, &platform, args.t_budget, &args.policies)?
            .into_iter()
            .map(ScheduleRow::from)
            .collect()
    } else {
        let mut rows = Vec::with_capacity(args.policies.len());
        for &policy in &args.policies {
            let mut ranked = rank_schedules(&graph, &platform, args.t_budget, &[policy])?;
            rows.push(ScheduleRow::from(ranked.remove(0)));
        }
        rows
    };
    if args.json {
        return write_json(out, &rows);
    }
    writeln!(
        out,
        "{:<14}  {:>15}  {:>15}  {:>15}  {:>15}",
        "policy", "S [cycles]", "S_bar [cycles]", "criterion [Hz]", "energy [J]"
    )?;
    for r in &rows {
        writeln!(
            out,
            "{:<14}  {:>15.8e}  {:>15.8e}  {:>15.8e}  {:>15.8e}",
            r.policy.name(),
            r.metrics.makespan,
            r.metrics.weighted_makespan,
            r.metrics.criterion,
            r.energy.total
        )?;
    }
    Ok(())
}

/// `points` evenly spaced values on `[lo, hi]`; a single point sits at `lo`.
fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
        }
    }
}

pub fn sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let platform = load_platform(&args.platform)?;
    if !(args.g_min.is_finite() && args.g_min >= 0.0 && args.g_max.is_finite() && args.g_max >= args.g_min) {
        return Err(CliError::input(format!(
            "need 0 <= g-min <= g-max, got [{}, {}]",
            args.g_min, args.g_max
        )));
    }
    if args.points == 0 {
        return Err(CliError::input("points must be at least 1"));
    }
    let rows = sweep_ratio_vs_overload(&platform, args.m, &linspace(args.g_min, args.g_max, args.points))?;
    let limits = overload_limits(&platform, args.m)?;

    let mut file;
    let sink: &mut dyn Write = match &args.output {
        Some(path) => {
            file = BufWriter::new(
                File::create(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?,
            );
            &mut file
        }
        None => out,
    };
    writeln!(sink, "g,x_m")?;
    for r in &rows {
        writeln!(sink, "{:.16e},{:.16e}", r.g, r.x_m)?;
    }
    writeln!(sink, "# limit g=0: (1'/m')^(1/2) = {:.16e}", limits.quadratic)?;
    writeln!(sink, "# limit g->inf: (1'/m')^(1/3) = {:.16e}", limits.cubic)?;
    sink.flush()?;
    Ok(())
}
