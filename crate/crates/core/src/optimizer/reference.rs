use serde::Serialize;

use crate::error::Result;
use crate::model::{DeadlineProblem, FrequencyAssignment};
use crate::numeric::{compensated_sum, increasing_positive_root};

/// `sum_m pi_{m'} w_m` with `pi_{m'} = m'^(1/(alpha+1))`.
pub fn weighted_makespan(problem: &DeadlineProblem) -> Result<f64> {
    let platform = problem.platform();
    let terms = problem
        .w()
        .active_levels()
        .map(|(m, w)| Ok(platform.parallel_weight(m)? * w))
        .collect::<Result<Vec<_>>>()?;
    Ok(compensated_sum(terms))
}

/// Smallest reference frequency compatible with the deadline,
/// `f' = sum_m pi_{m'} w_m / (t_budget - sum_m w_m d t_a)`.
///
/// This is the dynamic-energy optimum when every level runs at
/// `f_m = f' / pi_{m'}`.
pub fn reference_frequency_dynamic(problem: &DeadlineProblem) -> Result<f64> {
    Ok(weighted_makespan(problem)? / problem.compute_budget())
}

/// Per-level frequencies `f_m = f' / pi_{m'}` induced by a reference frequency.
pub fn induced_assignment(problem: &DeadlineProblem, reference: f64) -> Result<FrequencyAssignment> {
    let platform = problem.platform();
    let weights = (1..=platform.cores())
        .map(|m| platform.parallel_weight(m))
        .collect::<Result<Vec<_>>>()?;
    FrequencyAssignment::for_levels(problem.w(), |m| reference / weights[m - 1])
}

/// Total energy as a function of the reference frequency `f'`, obtained by
/// substituting `f_m = f' / pi_{m'}` into the full energy:
///
/// `A f'^alpha + B f'^(alpha-1) + C f' + D / f' + E0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceEnergyProfile {
    pub alpha: f64,
    /// `c1 d t_a sum pi w`
    pub memory: f64,
    /// `c1 sum pi^2 w`
    pub instruction: f64,
    /// `c2 d t_a sum w / pi`
    pub static_slope: f64,
    /// `c3 sum w pi`
    pub static_inverse: f64,
    /// `c2 sum w + c3 d t_a sum w`
    pub constant: f64,
}

impl ReferenceEnergyProfile {
    pub fn new(problem: &DeadlineProblem) -> Result<Self> {
        let p = problem.platform();
        let stall = problem.stall_per_cycle();
        let mut pw = Vec::new();
        let mut ppw = Vec::new();
        let mut w_over_p = Vec::new();
        for (m, w) in problem.w().active_levels() {
            let pi = p.parallel_weight(m)?;
            pw.push(pi * w);
            ppw.push(pi * pi * w);
            w_over_p.push(w / pi);
        }
        let sum_pw = compensated_sum(pw);
        let total = problem.w().total_cycles();
        Ok(Self {
            alpha: p.alpha(),
            memory: p.c1() * stall * sum_pw,
            instruction: p.c1() * compensated_sum(ppw),
            static_slope: p.c2() * stall * compensated_sum(w_over_p),
            static_inverse: p.c3() * sum_pw,
            constant: p.c2() * total + p.c3() * stall * total,
        })
    }

    pub fn energy(&self, f: f64) -> f64 {
        self.memory * f.powf(self.alpha)
            + self.instruction * f.powf(self.alpha - 1.0)
            + self.static_slope * f
            + self.static_inverse / f
            + self.constant
    }

    /// `f^2 dE/df = alpha A f^(alpha+1) + (alpha-1) B f^alpha + C f^2 - D`.
    pub fn stationarity(&self, f: f64) -> f64 {
        let fa = f.powf(self.alpha);
        self.alpha * self.memory * fa * f + (self.alpha - 1.0) * self.instruction * fa
            + self.static_slope * f * f
            - self.static_inverse
    }

    fn stationarity_slope(&self, f: f64) -> f64 {
        let a = self.alpha;
        let fam1 = f.powf(a - 1.0);
        a * (a + 1.0) * self.memory * fam1 * f + (a - 1.0) * a * self.instruction * fam1 + 2.0 * self.static_slope * f
    }

    /// Interior minimizer; `None` when the energy is increasing on `f' > 0`
    /// (no `c3` term).
    pub fn unconstrained_minimizer(&self) -> Result<Option<f64>> {
        if self.static_inverse <= 0.0 {
            return Ok(None);
        }
        let start = (self.static_inverse / ((self.alpha - 1.0) * self.instruction)).powf(1.0 / self.alpha);
        increasing_positive_root(|f| self.stationarity(f), |f| self.stationarity_slope(f), start).map(Some)
    }
}

/// Reference frequency minimizing total energy under the `f' / pi_{m'}`
/// assignment: the larger of the unconstrained minimizer and the
/// deadline-forced value.
pub fn reference_frequency_total(problem: &DeadlineProblem) -> Result<f64> {
    let forced = reference_frequency_dynamic(problem)?;
    let free = ReferenceEnergyProfile::new(problem)?.unconstrained_minimizer()?;
    Ok(free.map_or(forced, |f| f.max(forced)))
}
