use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Platform;
use crate::numeric::increasing_positive_root;

/// Residual of the pairwise optimality relation for dynamic-only optima,
///
/// `(m'[alpha-1 + alpha d t_a f_m])^(1/alpha) f_m = (n'[alpha-1 + alpha d t_a f_n])^(1/alpha) f_n`,
///
/// returned as `(lhs - rhs) / lhs`.
pub fn ratio_relation_residual(
    platform: &Platform,
    d: f64,
    m: usize,
    n: usize,
    f_m: f64,
    f_n: f64,
) -> Result<f64> {
    for f in [f_m, f_n] {
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::InvalidFrequency(f));
        }
    }
    let alpha = platform.alpha();
    let stall = d * platform.t_a();
    let side = |level: usize, f: f64| -> Result<f64> {
        let mp = platform.effective_cores(level)?.value();
        Ok((mp * (alpha - 1.0 + alpha * stall * f)).powf(1.0 / alpha) * f)
    };
    let lhs = side(m, f_m)?;
    let rhs = side(n, f_n)?;
    Ok((lhs - rhs) / lhs)
}

/// Interval bounds on `f_m / f_n` for an optimal pair with `m >= n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioBounds {
    /// `(n'/m')^(1/alpha)`, the instruction-energy minimizer.
    pub lower: f64,
    /// Upper end for the full (dynamic + static) energy.
    pub upper_total: f64,
    /// `(n'/m')^(1/(alpha+1))`, the memory-energy minimizer.
    pub upper_dynamic: f64,
}

impl RatioBounds {
    pub fn contains_total(&self, ratio: f64, slack: f64) -> bool {
        ratio >= self.lower - slack && ratio <= self.upper_total + slack
    }

    pub fn contains_dynamic(&self, ratio: f64, slack: f64) -> bool {
        ratio >= self.lower - slack && ratio <= self.upper_dynamic + slack
    }
}

pub fn ratio_bounds(platform: &Platform, m: usize, n: usize) -> Result<RatioBounds> {
    if m < n {
        return Err(Error::InvalidInput(format!(
            "ratio bounds need m >= n, got m = {m}, n = {n}"
        )));
    }
    let q = platform.effective_cores(n)?.value() / platform.effective_cores(m)?.value();
    let alpha = platform.alpha();
    Ok(RatioBounds {
        lower: q.powf(1.0 / alpha),
        upper_total: 1.0,
        upper_dynamic: q.powf(1.0 / (alpha + 1.0)),
    })
}

fn require_quadratic(platform: &Platform) -> Result<()> {
    if platform.alpha() != 2.0 {
        return Err(Error::UnsupportedAlpha(platform.alpha()));
    }
    Ok(())
}

/// `m' / 1'` where `1' = KM + (1 - K)` is the serial-region weight.
fn relative_parallelism(platform: &Platform, m: usize) -> Result<f64> {
    Ok(platform.effective_cores(m)?.value() / platform.effective_cores(1)?.value())
}

/// Ratio `x_m = f_m / f_1` for `alpha = 2` given the serial-region frequency:
/// positive root of `(m'/1') g x^3 + (m'/1') x^2 - (g + 1) = 0` with the
/// memory overload factor `g = 2 d t_a f_1`.
pub fn cubic_ratio(platform: &Platform, d: f64, m: usize, f_1: f64) -> Result<f64> {
    if !(f_1.is_finite() && f_1 > 0.0) {
        return Err(Error::InvalidFrequency(f_1));
    }
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::InvalidInput(format!("invalid data-to-CPU quotient {d}")));
    }
    cubic_ratio_at_overload(platform, m, 2.0 * d * platform.t_a() * f_1)
}

/// [`cubic_ratio`] parameterized directly by the overload factor `g`.
pub fn cubic_ratio_at_overload(platform: &Platform, m: usize, g: f64) -> Result<f64> {
    require_quadratic(platform)?;
    if !(g.is_finite() && g >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "memory overload factor must be finite and nonnegative, got {g}"
        )));
    }
    let r = relative_parallelism(platform, m)?;
    if g == 0.0 {
        return Ok(r.recip().sqrt());
    }
    let cubic = |x: f64| r * g * x * x * x + r * x * x - (g + 1.0);
    let slope = |x: f64| 3.0 * r * g * x * x + 2.0 * r * x;
    increasing_positive_root(cubic, slope, r.recip().sqrt())
}

/// Asymptotes of the overload sweep for level `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverloadLimits {
    /// `(1'/m')^(1/2)`, reached at `g = 0`.
    pub quadratic: f64,
    /// `(1'/m')^(1/3)`, approached as `g -> inf`.
    pub cubic: f64,
}

pub fn overload_limits(platform: &Platform, m: usize) -> Result<OverloadLimits> {
    let inv = relative_parallelism(platform, m)?.recip();
    Ok(OverloadLimits {
        quadratic: inv.sqrt(),
        cubic: inv.cbrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub g: f64,
    pub x_m: f64,
}

/// Optimal ratio `x_m` against memory overload `g`, one row per input `g`.
pub fn sweep_ratio_vs_overload(platform: &Platform, m: usize, g_range: &[f64]) -> Result<Vec<SweepRow>> {
    require_quadratic(platform)?;
    g_range
        .iter()
        .map(|&g| {
            Ok(SweepRow {
                g,
                x_m: cubic_ratio_at_overload(platform, m, g)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PlatformParams;

    fn platform(alpha: f64, k: f64, cores: usize, t_a: f64) -> Platform {
        Platform::new(PlatformParams {
            c1: 1.0,
            c2: 0.0,
            c3: 0.0,
            alpha,
            k,
            cores,
            t_a,
        })
        .unwrap()
    }

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn residual_symmetry_and_prior_relation() {
        let p = platform(2.5, 0.2, 6, 0.7);
        assert_eq!(ratio_relation_residual(&p, 0.4, 3, 3, 1.7, 1.7).unwrap(), 0.0);

        let p = platform(3.0, 0.0, 8, 0.0);
        // m^(1/3) f_m = n^(1/3) f_n  with m = 8, n = 1
        let r = ratio_relation_residual(&p, 0.0, 8, 1, 0.5, 1.0).unwrap();
        assert!(r.abs() < 1e-15);
        let r = ratio_relation_residual(&p, 0.0, 8, 1, 0.6, 1.0).unwrap();
        assert!(r.abs() > 1e-3);
        assert!(ratio_relation_residual(&p, 0.0, 8, 1, 0.0, 1.0).is_err());
    }

    #[test]
    fn bounds_examples() {
        let p = platform(2.0, 0.0, 4, 0.0);
        let b = ratio_bounds(&p, 4, 1).unwrap();
        assert!((b.lower - 0.5).abs() < 1e-15);
        assert_eq!(b.upper_total, 1.0);
        assert!((b.upper_dynamic - 0.25f64.cbrt()).abs() < 1e-15);
        assert!((b.upper_dynamic - 0.6300).abs() < 1e-4);

        let b = ratio_bounds(&p, 3, 3).unwrap();
        assert_eq!((b.lower, b.upper_total, b.upper_dynamic), (1.0, 1.0, 1.0));
        assert!(ratio_bounds(&p, 1, 2).is_err());

        let p = platform(2.7, 0.35, 8, 0.0);
        for n in 1..=8 {
            for m in n..=8 {
                let b = ratio_bounds(&p, m, n).unwrap();
                assert!(b.lower <= b.upper_dynamic && b.upper_dynamic <= b.upper_total);
            }
        }
    }

    #[test]
    fn cubic_limits() {
        let p = platform(2.0, 0.2, 8, 1.0);
        for m in 1..=8 {
            let lim = overload_limits(&p, m).unwrap();
            let x0 = cubic_ratio_at_overload(&p, m, 0.0).unwrap();
            assert!((x0 - lim.quadratic).abs() < 1e-12);
            let x100 = cubic_ratio_at_overload(&p, m, 100.0).unwrap();
            assert!((x100 / lim.cubic - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn cubic_matches_bisection_oracle() {
        // K = 0, m = 4, g = 1:  4x^3 + 4x^2 - 2 = 0
        let oracle = bisect(|x| 4.0 * x * x * x + 4.0 * x * x - 2.0, 0.0, 1.0);
        assert!((oracle - 0.565198).abs() < 1e-6);
        let p = platform(2.0, 0.0, 4, 0.5);
        let x = cubic_ratio(&p, 1.0, 4, 1.0).unwrap();
        assert!((x - oracle).abs() < 1e-12);
    }

    #[test]
    fn cubic_rejects_other_exponents() {
        let p = platform(2.5, 0.0, 4, 0.5);
        assert_eq!(cubic_ratio(&p, 1.0, 2, 1.0), Err(Error::UnsupportedAlpha(2.5)));
        assert!(sweep_ratio_vs_overload(&p, 2, &[0.0]).is_err());
    }

    #[test]
    fn sweep_is_monotone_between_limits() {
        let p = platform(2.0, 0.0, 2, 1.0);
        let gs = [0.0, 1.0, 10.0, 100.0];
        let rows = sweep_ratio_vs_overload(&p, 2, &gs).unwrap();
        let lim = overload_limits(&p, 2).unwrap();
        assert!((rows[0].x_m - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((lim.cubic - 0.7937).abs() < 1e-4);
        assert!(rows.windows(2).all(|w| w[0].x_m < w[1].x_m));
        assert!(rows.iter().all(|r| r.x_m >= lim.quadratic && r.x_m <= lim.cubic));

        let single = sweep_ratio_vs_overload(&p, 2, &[0.0]).unwrap();
        assert_eq!(single.len(), 1);
    }
}
