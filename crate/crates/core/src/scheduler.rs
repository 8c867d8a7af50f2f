//! Cycle-domain list scheduling of task graphs, parallelism extraction, and
//! schedule ranking by the energy-aware criterion
//! `S_bar / (t_budget - S d t_a)`.
//!
//! All cores share one frequency and `d` is application-wide, so cycle counts
//! do not depend on the frequencies eventually chosen. Schedules are therefore
//! built and measured in cycles.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DeadlineProblem, ParallelismVector, Platform, TaskGraph};
use crate::numeric::compensated_sum;
use crate::optimizer::{solve_constrained, OptimizationResult};

/// One task's slot: `[start, end)` in cycles on `core`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub core: usize,
    pub start: u64,
    pub end: u64,
}

/// A validated, non-preemptive schedule on `cores` identical cores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    cores: usize,
    /// Indexed like `TaskGraph::tasks()`.
    placements: Vec<Placement>,
    /// `busy[m - 1]`: cycles during which exactly `m` cores are busy.
    busy: Vec<u64>,
}

impl Schedule {
    /// Checks workloads, precedence and core exclusivity, then sweeps the
    /// timeline to derive the per-level busy cycles.
    pub fn new(graph: &TaskGraph, cores: usize, placements: Vec<Placement>) -> Result<Self> {
        if placements.len() != graph.len() {
            return Err(Error::LengthMismatch {
                expected: graph.len(),
                got: placements.len(),
            });
        }
        let invalid = |msg: String| Err(Error::InvalidInput(msg));
        for (task, p) in graph.tasks().iter().zip(&placements) {
            if p.core >= cores {
                return invalid(format!("task {:?} placed on core {} of {cores}", task.id, p.core));
            }
            if p.end < p.start || p.end - p.start != task.cw {
                return invalid(format!("task {:?} slot does not match its workload", task.id));
            }
        }
        for &(a, b) in graph.edges() {
            if placements[b].start < placements[a].end {
                return invalid(format!(
                    "task {:?} starts before predecessor {:?} ends",
                    graph.tasks()[b].id,
                    graph.tasks()[a].id
                ));
            }
        }
        for core in 0..cores {
            let mut slots: Vec<_> = placements.iter().filter(|p| p.core == core).collect();
            slots.sort_by_key(|p| p.start);
            if slots.windows(2).any(|w| w[1].start < w[0].end) {
                return invalid(format!("overlapping tasks on core {core}"));
            }
        }
        let busy = busy_profile_of(cores, &placements);
        Ok(Self {
            cores,
            placements,
            busy,
        })
    }

    pub fn cores(&self) -> usize {
        self.cores
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    /// Exact integer cycle counts per active-core level.
    pub fn busy_cycles(&self) -> &[u64] {
        &self.busy
    }

    /// Makespan in cycles, `S = sum_m w_m`.
    pub fn makespan(&self) -> u64 {
        self.busy.iter().sum()
    }
}

pub(crate) fn busy_profile_of(cores: usize, placements: &[Placement]) -> Vec<u64> {
    let mut events: Vec<(u64, i64)> = Vec::with_capacity(2 * placements.len());
    for p in placements.iter().filter(|p| p.end > p.start) {
        events.push((p.start, 1));
        events.push((p.end, -1));
    }
    events.sort_unstable();
    let mut busy = vec![0u64; cores];
    let mut active = 0i64;
    let mut last = 0u64;
    for (time, delta) in events {
        if active > 0 && time > last {
            busy[active as usize - 1] += time - last;
        }
        active += delta;
        last = time;
    }
    busy
}

/// Parallelism vector of `schedule` on `platform`.
pub fn parallelism_vector(schedule: &Schedule, platform: &Platform) -> Result<ParallelismVector> {
    if schedule.cores != platform.cores() {
        return Err(Error::LengthMismatch {
            expected: platform.cores(),
            got: schedule.cores,
        });
    }
    ParallelismVector::new(schedule.busy.iter().map(|&c| c as f64).collect())
}

/// Priority rule for greedy list scheduling. Ties go to the smaller task id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// Longest remaining path to a sink first (highest level first).
    CriticalPath,
    /// Largest compute workload first.
    LargestWork,
    /// Position in the id-ordered topological order.
    Fifo,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::CriticalPath, Policy::LargestWork, Policy::Fifo];

    pub fn name(self) -> &'static str {
        match self {
            Policy::CriticalPath => "critical-path",
            Policy::LargestWork => "largest-work",
            Policy::Fifo => "fifo",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown policy {s:?}")))
    }
}

/// Smaller key = dispatched first.
fn priority_keys(graph: &TaskGraph, policy: Policy) -> Vec<u64> {
    match policy {
        Policy::CriticalPath => graph.bottom_levels().into_iter().map(|l| u64::MAX - l).collect(),
        Policy::LargestWork => graph.tasks().iter().map(|t| u64::MAX - t.cw).collect(),
        Policy::Fifo => {
            let mut keys = vec![0u64; graph.len()];
            for (pos, t) in graph.topological_order().into_iter().enumerate() {
                keys[t] = pos as u64;
            }
            keys
        }
    }
}

/// Non-delay greedy list schedule: whenever a core is idle and a task is
/// ready, the highest-priority ready task starts on the lowest-index idle core.
pub fn list_schedule(graph: &TaskGraph, platform: &Platform, policy: Policy) -> Result<Schedule> {
    let cores = platform.cores();
    let keys = priority_keys(graph, policy);
    let n = graph.len();

    let mut waiting: Vec<usize> = (0..n).map(|t| graph.preds(t).len()).collect();
    let mut ready: BinaryHeap<Reverse<(u64, usize)>> = (0..n)
        .filter(|&t| waiting[t] == 0)
        .map(|t| Reverse((keys[t], t)))
        .collect();
    let mut running: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
    let mut core_free = vec![true; cores];
    let mut placements = vec![
        Placement {
            core: 0,
            start: 0,
            end: 0
        };
        n
    ];
    let mut now = 0u64;
    let mut done = 0usize;

    while done < n {
        for (core, free) in core_free.iter_mut().enumerate() {
            if !*free {
                continue;
            }
            let Some(Reverse((_, task))) = ready.pop() else {
                break;
            };
            let end = now + graph.tasks()[task].cw;
            placements[task] = Placement {
                core,
                start: now,
                end,
            };
            *free = false;
            running.push(Reverse((end, task)));
        }
        let Some(Reverse((next, _))) = running.peek().copied() else {
            return Err(Error::CyclicGraph);
        };
        now = next;
        while let Some(Reverse((end, task))) = running.peek().copied() {
            if end != now {
                break;
            }
            running.pop();
            done += 1;
            core_free[placements[task].core] = true;
            for &s in graph.succs(task) {
                waiting[s] -= 1;
                if waiting[s] == 0 {
                    ready.push(Reverse((keys[s], s)));
                }
            }
        }
    }
    Schedule::new(graph, cores, placements)
}

/// Makespan, weighted makespan and the energy-aware criterion of a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleMetrics {
    /// `S = sum_m w_m`, cycles.
    pub makespan: f64,
    /// `S_bar = sum_m pi_{m'} w_m`, `pi_{m'} = m'^(1/(alpha+1))`.
    pub weighted_makespan: f64,
    /// `S_bar / (t_budget - S d t_a)`: the smallest reference frequency the
    /// deadline allows.
    pub criterion: f64,
    /// `S d t_a`, seconds.
    pub memory_floor: f64,
}

pub fn schedule_metrics(schedule: &Schedule, platform: &Platform, d: f64, t_budget: f64) -> Result<ScheduleMetrics> {
    let w = parallelism_vector(schedule, platform)?;
    metrics_for(&w, platform, d, t_budget)
}

/// [`schedule_metrics`] from a parallelism vector.
pub fn metrics_for(w: &ParallelismVector, platform: &Platform, d: f64, t_budget: f64) -> Result<ScheduleMetrics> {
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::InvalidInput(format!("invalid data-to-CPU quotient {d}")));
    }
    let makespan = w.total_cycles();
    let memory_floor = makespan * d * platform.t_a();
    if !(t_budget > memory_floor) {
        return Err(Error::InfeasibleDeadline {
            t_budget,
            memory_floor,
        });
    }
    let weighted = w
        .active_levels()
        .map(|(m, cycles)| Ok(platform.parallel_weight(m)? * cycles))
        .collect::<Result<Vec<_>>>()?;
    let weighted_makespan = compensated_sum(weighted);
    Ok(ScheduleMetrics {
        makespan,
        weighted_makespan,
        criterion: weighted_makespan / (t_budget - memory_floor),
        memory_floor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedSchedule {
    pub policy: Policy,
    pub schedule: Schedule,
    pub w: ParallelismVector,
    pub metrics: ScheduleMetrics,
    pub result: OptimizationResult,
}

/// Build one schedule per policy, solve its frequencies, and sort ascending by
/// criterion. Equal criteria keep the order of `policies`.
pub fn rank_schedules(
    graph: &TaskGraph,
    platform: &Platform,
    t_budget: f64,
    policies: &[Policy],
) -> Result<Vec<RankedSchedule>> {
    if policies.is_empty() {
        return Err(Error::InvalidInput("no scheduling policy given".into()));
    }
    let mut rows = policies
        .par_iter()
        .map(|&policy| {
            let schedule = list_schedule(graph, platform, policy)?;
            let w = parallelism_vector(&schedule, platform)?;
            let metrics = metrics_for(&w, platform, graph.d(), t_budget)?;
            let problem = DeadlineProblem::new(*platform, w.clone(), graph.d(), t_budget)?;
            let result = solve_constrained(&problem)?;
            Ok(RankedSchedule {
                policy,
                schedule,
                w,
                metrics,
                result,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        a.metrics
            .criterion
            .partial_cmp(&b.metrics.criterion)
            .unwrap_or(Ordering::Equal)
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PlatformParams;

    fn platform(cores: usize, k: f64, t_a: f64) -> Platform {
        Platform::new(PlatformParams {
            c1: 1.0,
            c2: 0.0,
            c3: 0.0,
            alpha: 2.0,
            k,
            cores,
            t_a,
        })
        .unwrap()
    }

    fn diamond(cw: u64) -> TaskGraph {
        TaskGraph::from_parts(
            &[("1", cw), ("2", cw), ("3", cw), ("4", cw)],
            &[("1", "2"), ("1", "3"), ("2", "4"), ("3", "4")],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn chain_is_serial() {
        let g = TaskGraph::from_parts(&[("a", 3), ("b", 5), ("c", 2)], &[("a", "b"), ("b", "c")], 0.0).unwrap();
        for policy in Policy::ALL {
            let s = list_schedule(&g, &platform(2, 0.0, 0.0), policy).unwrap();
            assert_eq!(s.busy_cycles(), &[10, 0]);
        }
    }

    #[test]
    fn independent_pair_overlaps() {
        let g = TaskGraph::from_parts(&[("a", 7), ("b", 7)], &[], 0.0).unwrap();
        let s = list_schedule(&g, &platform(2, 0.0, 0.0), Policy::Fifo).unwrap();
        assert_eq!(s.busy_cycles(), &[0, 7]);
    }

    #[test]
    fn diamond_profile() {
        let s = list_schedule(&diamond(5), &platform(2, 0.0, 0.0), Policy::CriticalPath).unwrap();
        assert_eq!(s.busy_cycles(), &[10, 5]);
        let w = parallelism_vector(&s, &platform(2, 0.0, 0.0)).unwrap();
        assert_eq!(w.as_slice(), &[10.0, 5.0]);

        let s = list_schedule(&diamond(5), &platform(4, 0.0, 0.0), Policy::LargestWork).unwrap();
        assert_eq!(s.busy_cycles(), &[10, 5, 0, 0]);
    }

    #[test]
    fn idle_prefix_contributes_nothing() {
        let g = TaskGraph::from_parts(&[("a", 4)], &[], 0.0).unwrap();
        let s = Schedule::new(&g, 2, vec![Placement { core: 1, start: 100, end: 104 }]).unwrap();
        assert_eq!(s.busy_cycles(), &[4, 0]);
    }

    #[test]
    fn policies_differ_on_unbalanced_fork() {
        // a long chain x1 -> x2 beside three short independent tasks
        let g = TaskGraph::from_parts(
            &[("a", 2), ("b", 2), ("c", 2), ("x1", 3), ("x2", 3)],
            &[("x1", "x2")],
            0.0,
        )
        .unwrap();
        let p = platform(2, 0.0, 0.0);
        let cp = list_schedule(&g, &p, Policy::CriticalPath).unwrap();
        let fifo = list_schedule(&g, &p, Policy::Fifo).unwrap();
        assert_eq!(cp.makespan(), 6);
        assert_eq!(fifo.makespan(), 8);
        for s in [&cp, &fifo] {
            let weighted: u64 = s.busy_cycles().iter().enumerate().map(|(i, c)| (i as u64 + 1) * c).sum();
            assert_eq!(weighted, g.total_work());
        }
    }

    #[test]
    fn rejects_invalid_placements() {
        let g = diamond(1);
        let ok = vec![
            Placement { core: 0, start: 0, end: 1 },
            Placement { core: 0, start: 1, end: 2 },
            Placement { core: 1, start: 1, end: 2 },
            Placement { core: 0, start: 2, end: 3 },
        ];
        assert!(Schedule::new(&g, 2, ok.clone()).is_ok());
        let mut early = ok.clone();
        early[3].start = 1;
        early[3].end = 2;
        early[3].core = 1;
        assert!(Schedule::new(&g, 2, early).is_err());
        let mut overlap = ok.clone();
        overlap[2].core = 0;
        assert!(Schedule::new(&g, 2, overlap).is_err());
        let mut short = ok;
        short[0].end = 3;
        assert!(Schedule::new(&g, 2, short).is_err());
    }

    #[test]
    fn metrics_examples() {
        let p = platform(2, 0.0, 0.5);
        let serial = ParallelismVector::new(vec![8.0, 0.0]).unwrap();
        let m = metrics_for(&serial, &p, 0.0, 4.0).unwrap();
        assert_eq!(m.weighted_makespan, m.makespan);
        assert_eq!(m.criterion, 2.0);

        let m = metrics_for(&serial, &p, 0.5, 4.0).unwrap();
        assert_eq!(m.memory_floor, 2.0);
        assert_eq!(m.criterion, 4.0);
        assert_eq!(
            metrics_for(&serial, &p, 1.0, 4.0).unwrap_err(),
            Error::InfeasibleDeadline {
                t_budget: 4.0,
                memory_floor: 4.0
            }
        );
    }

    #[test]
    fn criterion_decreases_with_budget() {
        let p = platform(3, 0.2, 0.3);
        let w = ParallelismVector::new(vec![3.0, 2.0, 6.0]).unwrap();
        let crits: Vec<f64> = [5.0, 6.0, 10.0, 100.0]
            .iter()
            .map(|t| metrics_for(&w, &p, 0.9, *t).unwrap().criterion)
            .collect();
        assert!(crits.windows(2).all(|c| c[0] > c[1]));
    }

    #[test]
    fn ranking_is_sorted_and_single_policy_gives_one_row() {
        let g = TaskGraph::from_parts(
            &[("a", 2), ("b", 2), ("c", 2), ("x1", 3), ("x2", 3)],
            &[("x1", "x2")],
            0.4,
        )
        .unwrap();
        let p = platform(2, 0.1, 0.5);
        let rows = rank_schedules(&g, &p, 20.0, &Policy::ALL).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.windows(2).all(|r| r[0].metrics.criterion <= r[1].metrics.criterion));
        assert_eq!(rank_schedules(&g, &p, 20.0, &[Policy::Fifo]).unwrap().len(), 1);
        assert!(rank_schedules(&g, &p, 20.0, &[]).is_err());
    }

    #[test]
    fn policy_names_round_trip() {
        for p in Policy::ALL {
            assert_eq!(p.name().parse::<Policy>().unwrap(), p);
        }
        assert!("hlf".parse::<Policy>().is_err());
    }
}
