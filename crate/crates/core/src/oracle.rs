//! Brute-force verifiers for the analytical results: a deadline-filtered
//! log-grid search over frequencies, golden-section minimization in one
//! dimension, and exhaustive enumeration of greedy schedule placements.
//!
//! These are slow by construction and share no code path with the solvers
//! they check beyond the model's energy and time formulas.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{DeadlineProblem, FrequencyAssignment, TaskGraph};
use crate::optimizer::ReferenceEnergyProfile;
use crate::scheduler::{Placement, Schedule};

/// Log-spaced sampling of `[f_min, f_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub f_min: f64,
    pub f_max: f64,
    pub points: usize,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 100;

    pub fn new(f_min: f64, f_max: f64, points: usize) -> Result<Self> {
        if !(f_min > 0.0 && f_min < f_max && f_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "grid bounds must satisfy 0 < f_min < f_max, got [{f_min}, {f_max}]"
            )));
        }
        if points < Self::MIN_POINTS {
            return Err(Error::InvalidInput(format!(
                "grid needs at least {} points, got {points}",
                Self::MIN_POINTS
            )));
        }
        Ok(Self { f_min, f_max, points })
    }

    fn samples(&self, lo: f64, hi: f64) -> Vec<f64> {
        let (a, b) = (lo.ln(), hi.ln());
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| (a + (b - a) * i as f64 / last).exp())
            .collect()
    }
}

pub const MAX_GRID_LEVELS: usize = 4;
const ZOOM: f64 = 10.0;

struct Axis {
    m: usize,
    w: f64,
    freqs: Vec<f64>,
    energy: Vec<f64>,
}

struct GridBest {
    energy: f64,
    freqs: Vec<f64>,
}

/// Exhaustive search of the frequency grid for the lowest-energy point that
/// meets the deadline, followed by one 10x zoom around the best point.
///
/// Every axis but the last is enumerated; for each such tuple the last axis
/// takes the best grid point that keeps the deadline, or the exact frequency
/// that makes the deadline tight if that lies in the box and is cheaper. The
/// level with the most cycles is placed last so that outer-axis grid error
/// moves its frequency the least.
pub fn grid_minimize_energy(problem: &DeadlineProblem, grid: &GridSpec) -> Result<(FrequencyAssignment, f64)> {
    let mut active: Vec<(usize, f64)> = problem.w().active_levels().collect();
    active.sort_by(|a, b| a.1.total_cmp(&b.1));
    if active.len() > MAX_GRID_LEVELS {
        return Err(Error::InvalidInput(format!(
            "grid oracle handles at most {MAX_GRID_LEVELS} active levels, got {}",
            active.len()
        )));
    }
    let boxes = vec![(grid.f_min, grid.f_max); active.len()];
    let coarse = search(problem, grid, &active, &boxes).ok_or(Error::NoFeasibleGridPoint)?;

    let half_width = (grid.f_max / grid.f_min).ln() / ZOOM / 2.0;
    let zoomed: Vec<(f64, f64)> = coarse
        .freqs
        .iter()
        .map(|f| (f * (-half_width).exp(), f * half_width.exp()))
        .collect();
    let best = match search(problem, grid, &active, &zoomed) {
        Some(fine) if fine.energy < coarse.energy => fine,
        _ => coarse,
    };

    let mut slots = vec![None; problem.platform().cores()];
    for ((m, _), f) in active.iter().zip(&best.freqs) {
        slots[m - 1] = Some(*f);
    }
    let assignment = FrequencyAssignment::new(slots)?;
    let energy = problem.total_energy(&assignment)?.total;
    Ok((assignment, energy))
}

fn search(problem: &DeadlineProblem, grid: &GridSpec, active: &[(usize, f64)], boxes: &[(f64, f64)]) -> Option<GridBest> {
    let axes: Vec<Axis> = active
        .iter()
        .zip(boxes)
        .map(|(&(m, w), &(lo, hi))| {
            let freqs = grid.samples(lo, hi);
            let energy = freqs.iter().map(|&f| problem.level_energy(m, f)).collect();
            Axis { m, w, freqs, energy }
        })
        .collect();
    let (last, outer) = axes.split_last()?;
    let budget = problem.compute_budget();

    // suffix_best[i]: index of the cheapest grid point at or above i
    let mut suffix_best = vec![0usize; last.freqs.len()];
    let mut best_idx = last.freqs.len() - 1;
    for i in (0..last.freqs.len()).rev() {
        if last.energy[i] <= last.energy[best_idx] {
            best_idx = i;
        }
        suffix_best[i] = best_idx;
    }
    let (last_lo, last_hi) = (last.freqs[0], *last.freqs.last()?);

    let mut best: Option<GridBest> = None;
    let mut idx = vec![0usize; outer.len()];
    loop {
        let used: f64 = outer.iter().zip(&idx).map(|(a, &i)| a.w / a.freqs[i]).sum();
        let remaining = budget - used;
        if remaining > 0.0 {
            let required = last.w / remaining;
            let mut candidate: Option<(f64, f64)> = None;
            let start = last.freqs.partition_point(|&f| f < required);
            if start < last.freqs.len() {
                let j = suffix_best[start];
                candidate = Some((last.energy[j], last.freqs[j]));
            }
            if (last_lo..=last_hi).contains(&required) {
                let e = problem.level_energy(last.m, required);
                if candidate.is_none_or(|(ce, _)| e < ce) {
                    candidate = Some((e, required));
                }
            }
            if let Some((e_last, f_last)) = candidate {
                let energy = outer.iter().zip(&idx).map(|(a, &i)| a.energy[i]).sum::<f64>() + e_last;
                if best.as_ref().is_none_or(|b| energy < b.energy) {
                    let mut freqs: Vec<f64> = outer.iter().zip(&idx).map(|(a, &i)| a.freqs[i]).collect();
                    freqs.push(f_last);
                    best = Some(GridBest { energy, freqs });
                }
            }
        }
        // odometer over the outer axes
        let mut k = 0;
        loop {
            if k == outer.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < outer[k].freqs.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

const GOLDEN_RTOL: f64 = 1e-10;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimizer of a unimodal `f` on `[lo, hi]`,
/// to a relative bracket width of 1e-10. Endpoints are returned when they
/// beat the interior estimate (monotone functions).
pub fn golden_section_1d<F>(f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidInput(format!("bad bracket [{lo}, {hi}]")));
    }
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite(x))
        }
    };
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    while (b - a) > GOLDEN_RTOL * 0.5 * (a.abs() + b.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
        if c >= d {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    let candidates = [(eval(mid)?, mid), (eval(lo)?, lo), (eval(hi)?, hi)];
    let best = candidates
        .iter()
        .fold(candidates[0], |acc, &c| if c.0 < acc.0 { c } else { acc });
    Ok(best.1)
}

/// Golden-section minimizer of the reference-frequency energy profile.
///
/// Plain golden section on energy values cannot resolve the minimizer much
/// below sqrt(machine epsilon), because values near the minimum agree to
/// rounding. The second pass minimizes the difference `E(f) - E(f0)` computed
/// term by term with `expm1`/`ln_1p`, whose rounding error shrinks with the
/// difference itself.
pub fn reference_energy_minimizer(profile: &ReferenceEnergyProfile, lo: f64, hi: f64) -> Result<f64> {
    let rough = golden_section_1d(|f| profile.energy(f), lo, hi)?;
    if rough == lo || rough == hi {
        return Ok(rough);
    }
    let a = profile.alpha;
    let pow_delta = |x: f64, p: f64| rough.powf(p) * (p * ((x - rough) / rough).ln_1p()).exp_m1();
    let delta = |x: f64| {
        profile.memory * pow_delta(x, a)
            + profile.instruction * pow_delta(x, a - 1.0)
            + profile.static_slope * (x - rough)
            + profile.static_inverse * (rough - x) / (x * rough)
    };
    let span = 1e-6 * rough;
    golden_section_1d(delta, rough - span, rough + span)
}

pub const MAX_ENUM_TASKS: usize = 8;
pub const MAX_ENUM_CORES: usize = 3;

/// Every distinct busy profile reachable by placing tasks one at a time, in
/// any precedence-respecting order, each on any core at the earliest cycle that
/// core and the task's predecessors allow. One schedule per distinct profile,
/// ordered by profile.
///
/// Adjacent placements on different cores with no precedence between them
/// commute; only the order with the smaller task index first is explored.
pub fn enumerate_schedules(graph: &TaskGraph, cores: usize) -> Result<Vec<Schedule>> {
    if graph.len() > MAX_ENUM_TASKS || cores > MAX_ENUM_CORES || cores == 0 {
        return Err(Error::EnumerationCap {
            tasks: graph.len(),
            cores,
            max_tasks: MAX_ENUM_TASKS,
            max_cores: MAX_ENUM_CORES,
        });
    }
    let mut state = Enumeration {
        graph,
        core_free: vec![0; cores],
        placements: vec![
            Placement {
                core: 0,
                start: 0,
                end: 0
            };
            graph.len()
        ],
        placed: vec![false; graph.len()],
        found: BTreeMap::new(),
    };
    state.descend(0, None);
    state
        .found
        .into_values()
        .map(|placements| Schedule::new(graph, cores, placements))
        .collect()
}

struct Enumeration<'a> {
    graph: &'a TaskGraph,
    core_free: Vec<u64>,
    placements: Vec<Placement>,
    placed: Vec<bool>,
    found: BTreeMap<Vec<u64>, Vec<Placement>>,
}

impl Enumeration<'_> {
    fn descend(&mut self, depth: usize, last: Option<(usize, usize)>) {
        let n = self.graph.len();
        if depth == n {
            let busy = crate::scheduler::busy_profile_of(self.core_free.len(), &self.placements);
            self.found.entry(busy).or_insert_with(|| self.placements.clone());
            return;
        }
        for task in 0..n {
            if self.placed[task] || !self.graph.preds(task).iter().all(|&p| self.placed[p]) {
                continue;
            }
            let ready_at = self
                .graph
                .preds(task)
                .iter()
                .map(|&p| self.placements[p].end)
                .max()
                .unwrap_or(0);
            for core in 0..self.core_free.len() {
                if let Some((prev_task, prev_core)) = last {
                    let commutes = prev_core != core && !self.graph.preds(task).contains(&prev_task);
                    if commutes && task < prev_task {
                        continue;
                    }
                }
                let start = ready_at.max(self.core_free[core]);
                let end = start + self.graph.tasks()[task].cw;
                let saved_free = self.core_free[core];
                self.core_free[core] = end;
                self.placements[task] = Placement { core, start, end };
                self.placed[task] = true;
                self.descend(depth + 1, Some((task, core)));
                self.placed[task] = false;
                self.core_free[core] = saved_free;
            }
        }
    }
}
