use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw chip constants, as read from a platform description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatformParams {
    /// Dynamic power coefficient, W / Hz^alpha.
    pub c1: f64,
    /// Static power slope, W / Hz.
    pub c2: f64,
    /// Static power offset, W.
    pub c3: f64,
    /// Dynamic power exponent (real, >= 2).
    pub alpha: f64,
    /// Ratio of idle-core to active-core dynamic coefficient.
    #[serde(rename = "K")]
    pub k: f64,
    /// Number of cores on the chip.
    #[serde(rename = "M")]
    pub cores: usize,
    /// Memory access latency, seconds.
    pub t_a: f64,
}

/// A validated multicore chip running under global DVFS.
///
/// Frequencies are in Hz, times in seconds, workloads in cycles. The library
/// never converts units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Platform {
    params: PlatformParams,
}

/// `m' = m + K(M - m)`, the dynamic-power weight of `m` active cores plus
/// `M - m` idle cores clocked at the same frequency.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EffectiveCores(f64);

impl EffectiveCores {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Platform {
    pub fn new(params: PlatformParams) -> Result<Self> {
        let PlatformParams { c1, c2, c3, alpha, k, cores, t_a } = params;
        let bad = |msg: String| Err(Error::InvalidPlatform(msg));
        if cores < 2 {
            return bad(format!("M must be at least 2, got {cores}"));
        }
        if !(c1.is_finite() && c1 > 0.0) {
            return bad(format!("c1 must be positive, got {c1}"));
        }
        if !(c2.is_finite() && c2 >= 0.0) {
            return bad(format!("c2 must be nonnegative, got {c2}"));
        }
        if !(c3.is_finite() && c3 >= 0.0) {
            return bad(format!("c3 must be nonnegative, got {c3}"));
        }
        if !(alpha.is_finite() && alpha >= 2.0) {
            return bad(format!("alpha must be at least 2, got {alpha}"));
        }
        if !(k.is_finite() && (0.0..1.0).contains(&k)) {
            return bad(format!("K must lie in [0, 1), got {k}"));
        }
        if !(t_a.is_finite() && t_a >= 0.0) {
            return bad(format!("t_a must be nonnegative, got {t_a}"));
        }
        Ok(Self { params })
    }

    pub fn params(&self) -> PlatformParams {
        self.params
    }

    pub fn cores(&self) -> usize {
        self.params.cores
    }

    pub fn c1(&self) -> f64 {
        self.params.c1
    }

    pub fn c2(&self) -> f64 {
        self.params.c2
    }

    pub fn c3(&self) -> f64 {
        self.params.c3
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn k(&self) -> f64 {
        self.params.k
    }

    pub fn t_a(&self) -> f64 {
        self.params.t_a
    }

    /// The same chip with static power removed (c2 = c3 = 0).
    pub fn dynamic_only(&self) -> Self {
        Self {
            params: PlatformParams {
                c2: 0.0,
                c3: 0.0,
                ..self.params
            },
        }
    }

    pub fn check_level(&self, m: usize) -> Result<()> {
        if m == 0 || m > self.params.cores {
            return Err(Error::CoreCountOutOfRange {
                m,
                cores: self.params.cores,
            });
        }
        Ok(())
    }

    pub fn effective_cores(&self, m: usize) -> Result<EffectiveCores> {
        self.check_level(m)?;
        Ok(EffectiveCores(self.effective_cores_unchecked(m)))
    }

    pub(crate) fn effective_cores_unchecked(&self, m: usize) -> f64 {
        let PlatformParams { k, cores, .. } = self.params;
        m as f64 + k * (cores - m) as f64
    }

    /// `pi_{m'} = m'^(1/(alpha+1))`, the per-level weight of the weighted
    /// makespan and the divisor mapping a reference frequency onto level `m`.
    pub fn parallel_weight(&self, m: usize) -> Result<f64> {
        Ok(self.effective_cores(m)?.value().powf(1.0 / (self.alpha() + 1.0)))
    }

    /// Chip power with `m` active cores at frequency `f`:
    /// `m' c1 f^alpha + c2 f + c3`.
    pub fn chip_power(&self, m: usize, f: f64) -> Result<f64> {
        let mp = self.effective_cores(m)?.value();
        check_frequency(f)?;
        let PlatformParams { c1, c2, c3, alpha, .. } = self.params;
        Ok(mp * c1 * f.powf(alpha) + c2 * f + c3)
    }

    /// Energy per clock cycle, `chip_power / f = m' c1 f^(alpha-1) + c2 + c3/f`.
    pub fn energy_per_cycle(&self, m: usize, f: f64) -> Result<f64> {
        let mp = self.effective_cores(m)?.value();
        check_frequency(f)?;
        Ok(self.energy_per_cycle_unchecked(mp, f))
    }

    pub(crate) fn energy_per_cycle_unchecked(&self, mp: f64, f: f64) -> f64 {
        let PlatformParams { c1, c2, c3, alpha, .. } = self.params;
        mp * c1 * f.powf(alpha - 1.0) + c2 + c3 / f
    }
}

pub(crate) fn check_frequency(f: f64) -> Result<()> {
    if f.is_finite() && f > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidFrequency(f))
    }
}
