use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DeadlineProblem, EnergyBreakdown, FrequencyAssignment, Platform};
use crate::numeric::{compensated_sum, increasing_positive_root};

/// Per-level stationarity polynomial
///
/// `P(f) = m' c1 d t_a alpha f^(alpha+1) + m' c1 (alpha-1) f^alpha + c2 d t_a f^2 - c3`.
///
/// `P(f) = (f^2 / w_m) dE_m/df`, so `P(f) = 0` is the unconstrained
/// optimum of level `m` and `P(f) = lambda` is its stationarity condition under a
/// deadline multiplier `lambda`. `P` is strictly increasing on `f > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationarityPolynomial {
    effective_cores: f64,
    c1: f64,
    c2: f64,
    c3: f64,
    alpha: f64,
    stall: f64,
}

impl StationarityPolynomial {
    pub fn new(platform: &Platform, d: f64, m: usize) -> Result<Self> {
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "data-to-CPU quotient must be finite and nonnegative, got {d}"
            )));
        }
        Ok(Self {
            effective_cores: platform.effective_cores(m)?.value(),
            c1: platform.c1(),
            c2: platform.c2(),
            c3: platform.c3(),
            alpha: platform.alpha(),
            stall: d * platform.t_a(),
        })
    }

    fn terms(&self, f: f64) -> [f64; 4] {
        let Self {
            effective_cores: mp,
            c1,
            c2,
            c3,
            alpha,
            stall,
        } = *self;
        let fa = f.powf(alpha);
        [
            mp * c1 * stall * alpha * fa * f,
            mp * c1 * (alpha - 1.0) * fa,
            c2 * stall * f * f,
            -c3,
        ]
    }

    pub fn value(&self, f: f64) -> f64 {
        self.terms(f).iter().sum()
    }

    pub fn derivative(&self, f: f64) -> f64 {
        let Self {
            effective_cores: mp,
            c1,
            c2,
            alpha,
            stall,
            ..
        } = *self;
        let fam1 = f.powf(alpha - 1.0);
        mp * c1 * stall * alpha * (alpha + 1.0) * fam1 * f
            + mp * c1 * (alpha - 1.0) * alpha * fam1
            + 2.0 * c2 * stall * f
    }

    /// `|P(f)|` divided by the sum of the magnitudes of its terms.
    pub fn relative_residual(&self, f: f64) -> f64 {
        let terms = self.terms(f);
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        if scale == 0.0 {
            return 0.0;
        }
        terms.iter().sum::<f64>().abs() / scale
    }

    /// Solve `P(f) = lambda` for `f > 0`. Requires `c3 + lambda > 0`.
    pub fn inverse(&self, lambda: f64) -> Result<f64> {
        let rhs = self.c3 + lambda;
        if !(rhs > 0.0) {
            return Err(Error::NoInteriorMinimizer);
        }
        // root of the instruction term alone; every other term is >= 0 so
        // this overestimates the true root
        let start = (rhs / (self.effective_cores * self.c1 * (self.alpha - 1.0))).powf(1.0 / self.alpha);
        increasing_positive_root(|f| self.value(f) - lambda, |f| self.derivative(f), start)
    }
}

/// Frequency minimizing the energy of level `m` with no deadline.
///
/// The stationarity polynomial contains no workload term, so the result
/// depends only on the chip and the data-to-CPU quotient `d`.
pub fn unconstrained_level_frequency(platform: &Platform, d: f64, m: usize) -> Result<f64> {
    if platform.c3() == 0.0 {
        return Err(Error::NoInteriorMinimizer);
    }
    StationarityPolynomial::new(platform, d, m)?.inverse(0.0)
}

/// Solution of the deadline-constrained energy minimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub f: FrequencyAssignment,
    pub energy: EnergyBreakdown,
    /// Completion time, seconds.
    pub time: f64,
    pub deadline_binding: bool,
    /// Lagrange multiplier of the deadline constraint (J/s); zero when slack.
    pub dual_multiplier: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    /// Upper bound on every frequency. Unbounded by default.
    pub f_max: Option<f64>,
}

/// [`solve_constrained_with`] with default options.
pub fn solve_constrained(problem: &DeadlineProblem) -> Result<OptimizationResult> {
    solve_constrained_with(problem, &SolveOptions::default())
}

const MAX_BRACKET_GROWTH: usize = 400;
const MAX_DUAL_ITERATIONS: usize = 400;
const DUAL_RTOL: f64 = 1e-15;
const DEADLINE_RTOL: f64 = 1e-13;

struct Level {
    m: usize,
    w: f64,
    poly: StationarityPolynomial,
}

struct Dual<'a> {
    problem: &'a DeadlineProblem,
    levels: Vec<Level>,
    f_max: Option<f64>,
}

impl Dual<'_> {
    fn frequencies(&self, lambda: f64) -> Result<Vec<f64>> {
        self.levels
            .iter()
            .map(|l| {
                let f = l.poly.inverse(lambda)?;
                Ok(self.f_max.map_or(f, |cap| f.min(cap)))
            })
            .collect()
    }

    /// `sum_m w_m / f_m`. Compared against the compute budget rather than
    /// the deadline: when memory stalls dominate, the deadline resolves the
    /// compute time only to its own rounding.
    fn compute_time(&self, freqs: &[f64]) -> f64 {
        compensated_sum(self.levels.iter().zip(freqs).map(|(l, f)| l.w / f))
    }

    /// Close the rounding-level gap left by bisection: retarget the level with
    /// the largest time share so that the compute time lands on the compute
    /// budget, keeping the closest iterate.
    fn tighten(&self, freqs: &mut [f64]) {
        let budget = self.problem.compute_budget();
        let Some(j) = (0..freqs.len())
            .filter(|&j| self.f_max.is_none_or(|cap| freqs[j] < cap))
            .max_by(|&a, &b| (self.levels[a].w / freqs[a]).total_cmp(&(self.levels[b].w / freqs[b])))
        else {
            return;
        };
        let w = self.levels[j].w;
        let mut best = (freqs[j], (self.compute_time(freqs) - budget).abs());
        for _ in 0..4 {
            if best.1 == 0.0 {
                break;
            }
            let gap = budget - self.compute_time(freqs);
            let candidate = w / (w / freqs[j] + gap);
            if !(candidate.is_finite() && candidate > 0.0) || self.f_max.is_some_and(|cap| candidate > cap) {
                break;
            }
            freqs[j] = candidate;
            let err = (self.compute_time(freqs) - budget).abs();
            if err < best.1 {
                best = (candidate, err);
            }
        }
        freqs[j] = best.0;
    }

    fn finish(&self, freqs: &[f64], lambda: f64) -> Result<OptimizationResult> {
        let mut slots = vec![None; self.problem.platform().cores()];
        for (l, f) in self.levels.iter().zip(freqs) {
            slots[l.m - 1] = Some(*f);
        }
        let f = FrequencyAssignment::new(slots)?;
        Ok(OptimizationResult {
            energy: self.problem.total_energy(&f)?,
            time: self.problem.completion_time(&f)?,
            f,
            deadline_binding: lambda > 0.0,
            dual_multiplier: lambda,
        })
    }
}

/// KKT-optimal per-level frequencies for the deadline-constrained problem.
///
/// Level stationarity under multiplier `lambda` reads `P_m(f_m) = lambda`, and
/// completion time is strictly decreasing in `lambda`. If the unconstrained
/// optimum meets the deadline it is returned with `lambda = 0`; otherwise
/// `lambda` is bisected until the deadline is tight.
pub fn solve_constrained_with(problem: &DeadlineProblem, options: &SolveOptions) -> Result<OptimizationResult> {
    let platform = problem.platform();
    let levels = problem
        .w()
        .active_levels()
        .map(|(m, w)| {
            Ok(Level {
                m,
                w,
                poly: StationarityPolynomial::new(platform, problem.d(), m)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(cap) = options.f_max {
        if !(cap.is_finite() && cap > 0.0) {
            return Err(Error::InvalidFrequency(cap));
        }
    }
    let dual = Dual {
        problem,
        levels,
        f_max: options.f_max,
    };
    let budget = problem.compute_budget();

    if let Some(cap) = dual.f_max {
        let fastest = vec![cap; dual.levels.len()];
        if dual.compute_time(&fastest) > budget {
            return Err(Error::CapInfeasible {
                t_budget: problem.t_budget(),
                min_time: dual.compute_time(&fastest) + problem.memory_floor(),
            });
        }
    }

    if platform.c3() > 0.0 {
        let free = dual.frequencies(0.0)?;
        if dual.compute_time(&free) <= budget {
            return dual.finish(&free, 0.0);
        }
    }

    // At the single frequency that exactly meets the deadline, the largest P_m
    // is a multiplier whose frequencies all sit at or above it (feasible) and
    // the smallest is one whose frequencies all sit at or below it.
    let uniform = problem.w().total_cycles() / budget;
    let p_at_uniform = dual.levels.iter().map(|l| l.poly.value(uniform));
    let mut lo = p_at_uniform.clone().fold(f64::INFINITY, f64::min).max(0.0);
    let mut hi = p_at_uniform.fold(f64::NEG_INFINITY, f64::max);
    if !(hi > 0.0) {
        hi = platform.c3().max(f64::MIN_POSITIVE);
    }

    let mut hi_freqs = dual.frequencies(hi)?;
    let mut grown = 0;
    while dual.compute_time(&hi_freqs) > budget {
        lo = hi;
        hi *= 10.0;
        hi_freqs = dual.frequencies(hi)?;
        grown += 1;
        if grown > MAX_BRACKET_GROWTH || !hi.is_finite() {
            return Err(Error::RootNotBracketed { lo, hi });
        }
    }

    for _ in 0..MAX_DUAL_ITERATIONS {
        let slack = budget - dual.compute_time(&hi_freqs);
        if slack <= DEADLINE_RTOL * budget || hi - lo <= DUAL_RTOL * hi {
            break;
        }
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        let freqs = dual.frequencies(mid)?;
        if dual.compute_time(&freqs) > budget {
            lo = mid;
        } else {
            hi = mid;
            hi_freqs = freqs;
        }
    }
    dual.tighten(&mut hi_freqs);
    dual.finish(&hi_freqs, hi)
}
