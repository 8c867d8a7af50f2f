use serde::Serialize;

use super::platform::{check_frequency, Platform};
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// `w = [w_1, .., w_M]`: cycles executed while exactly `m` cores are active.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ParallelismVector(Vec<f64>);

impl ParallelismVector {
    pub fn new(cycles: Vec<f64>) -> Result<Self> {
        if let Some(bad) = cycles.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidInput(format!(
                "parallelism entries must be finite and nonnegative, got {bad}"
            )));
        }
        if !cycles.iter().any(|w| *w > 0.0) {
            return Err(Error::InvalidInput(
                "parallelism vector has no positive entry".into(),
            ));
        }
        Ok(Self(cycles))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Cycles at level `m` (1-based).
    pub fn get(&self, m: usize) -> f64 {
        self.0[m - 1]
    }

    /// `(m, w_m)` for every level with `w_m > 0`.
    pub fn active_levels(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, w)| (i + 1, *w))
    }

    /// Cycle makespan `S = sum_m w_m`.
    pub fn total_cycles(&self) -> f64 {
        compensated_sum(self.0.iter().copied())
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|w| w * factor).collect())
    }
}

/// One frequency per parallelism level; `None` marks a level with no cycles.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FrequencyAssignment(Vec<Option<f64>>);

impl FrequencyAssignment {
    pub fn new(frequencies: Vec<Option<f64>>) -> Result<Self> {
        for f in frequencies.iter().flatten() {
            check_frequency(*f)?;
        }
        Ok(Self(frequencies))
    }

    /// Assignment whose levels are `Some(f)` exactly where `w` is active.
    pub fn for_levels<F>(w: &ParallelismVector, mut freq: F) -> Result<Self>
    where
        F: FnMut(usize) -> f64,
    {
        Self::new(
            w.as_slice()
                .iter()
                .enumerate()
                .map(|(i, cycles)| (*cycles > 0.0).then(|| freq(i + 1)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Option<f64>] {
        &self.0
    }

    /// Frequency at level `m` (1-based); `None` for unused levels.
    pub fn get(&self, m: usize) -> Option<f64> {
        self.0.get(m - 1).copied().flatten()
    }

    /// Multiply every used frequency by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|f| f.map(|f| f * factor)).collect())
    }
}

/// Total CPU energy split into memory-wait dynamic, instruction dynamic, and
/// static parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub memory_dynamic: f64,
    pub instruction_dynamic: f64,
    pub static_energy: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn dynamic(&self) -> f64 {
        self.memory_dynamic + self.instruction_dynamic
    }
}

/// A deadline-constrained frequency selection problem for one schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeadlineProblem {
    platform: Platform,
    w: ParallelismVector,
    d: f64,
    t_budget: f64,
}

impl DeadlineProblem {
    /// Validates lengths and rejects deadlines at or below the memory floor
    /// `sum_m w_m d t_a`.
    pub fn new(platform: Platform, w: ParallelismVector, d: f64, t_budget: f64) -> Result<Self> {
        if w.len() != platform.cores() {
            return Err(Error::LengthMismatch {
                expected: platform.cores(),
                got: w.len(),
            });
        }
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "data-to-CPU quotient must be finite and nonnegative, got {d}"
            )));
        }
        if !(t_budget.is_finite() && t_budget > 0.0) {
            return Err(Error::InvalidInput(format!(
                "deadline must be positive, got {t_budget}"
            )));
        }
        let memory_floor = memory_floor(&platform, &w, d);
        if t_budget <= memory_floor {
            return Err(Error::InfeasibleDeadline {
                t_budget,
                memory_floor,
            });
        }
        Ok(Self {
            platform,
            w,
            d,
            t_budget,
        })
    }

    pub fn platform(&self) -> &Platform {
        &self.platform
    }

    pub fn w(&self) -> &ParallelismVector {
        &self.w
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn t_budget(&self) -> f64 {
        self.t_budget
    }

    /// Stall time per cycle, `d t_a`.
    pub fn stall_per_cycle(&self) -> f64 {
        self.d * self.platform.t_a()
    }

    /// Frequency-independent completion time `sum_m w_m d t_a`.
    pub fn memory_floor(&self) -> f64 {
        memory_floor(&self.platform, &self.w, self.d)
    }

    /// Time left for computation once memory stalls are paid.
    pub fn compute_budget(&self) -> f64 {
        self.t_budget - self.memory_floor()
    }

    /// Same instance with static power removed.
    pub fn dynamic_only(&self) -> Self {
        Self {
            platform: self.platform.dynamic_only(),
            ..self.clone()
        }
    }

    /// Same instance with a different deadline.
    pub fn with_deadline(&self, t_budget: f64) -> Result<Self> {
        Self::new(self.platform, self.w.clone(), self.d, t_budget)
    }

    fn check_assignment(&self, f: &FrequencyAssignment) -> Result<()> {
        if f.len() != self.w.len() {
            return Err(Error::LengthMismatch {
                expected: self.w.len(),
                got: f.len(),
            });
        }
        for (m, cycles) in self.w.active_levels() {
            if f.get(m).is_none() {
                return Err(Error::MissingFrequency { level: m, cycles });
            }
        }
        Ok(())
    }

    fn active_pairs<'a>(
        &'a self,
        f: &'a FrequencyAssignment,
    ) -> impl Iterator<Item = (f64, f64, f64)> + 'a {
        self.w.active_levels().map(move |(m, w)| {
            let mp = self.platform.effective_cores_unchecked(m);
            (mp, w, f.get(m).expect("checked assignment"))
        })
    }

    /// `sum_m pbar_m(f_m) (w_m + w_m d t_a f_m)`, with its three-way split.
    pub fn total_energy(&self, f: &FrequencyAssignment) -> Result<EnergyBreakdown> {
        self.check_assignment(f)?;
        let p = &self.platform;
        let (c1, c2, c3, alpha) = (p.c1(), p.c2(), p.c3(), p.alpha());
        let s = self.stall_per_cycle();

        let total = compensated_sum(
            self.active_pairs(f)
                .map(|(mp, w, fm)| p.energy_per_cycle_unchecked(mp, fm) * (w + w * s * fm)),
        );
        let memory_dynamic =
            compensated_sum(self.active_pairs(f).map(|(mp, w, fm)| mp * c1 * w * s * fm.powf(alpha)));
        let instruction_dynamic =
            compensated_sum(self.active_pairs(f).map(|(mp, w, fm)| mp * c1 * w * fm.powf(alpha - 1.0)));
        let static_energy = compensated_sum(self.active_pairs(f).map(|(_, w, fm)| {
            c2 * w * s * fm + c3 * w / fm + c2 * w + c3 * w * s
        }));

        Ok(EnergyBreakdown {
            memory_dynamic,
            instruction_dynamic,
            static_energy,
            total,
        })
    }

    /// `sum_m w_m / f_m + sum_m w_m d t_a`.
    pub fn completion_time(&self, f: &FrequencyAssignment) -> Result<f64> {
        self.check_assignment(f)?;
        let compute = compensated_sum(self.active_pairs(f).map(|(_, w, fm)| w / fm));
        Ok(compute + self.memory_floor())
    }

    /// Energy of a single level `m` run at `f`, all components included.
    pub fn level_energy(&self, m: usize, f: f64) -> f64 {
        let w = self.w.get(m);
        let mp = self.platform.effective_cores_unchecked(m);
        self.platform.energy_per_cycle_unchecked(mp, f) * (w + w * self.stall_per_cycle() * f)
    }
}

fn memory_floor(platform: &Platform, w: &ParallelismVector, d: f64) -> f64 {
    w.total_cycles() * d * platform.t_a()
}
