//! Small numerical kernels shared by the model and the solvers: compensated
//! summation and a bracketed bisection/Newton root finder for functions that
//! are strictly increasing on the positive half-line.

use crate::error::{Error, Result};

/// Relative bracket width at which bisection hands over to Newton.
pub const BISECTION_RTOL: f64 = 1e-6;

/// Relative step size at which the Newton polish stops.
pub const ROOT_RTOL: f64 = 1e-12;

const MAX_BRACKET_STEPS: usize = 2200;
const MAX_NEWTON_STEPS: usize = 200;

/// Neumaier (improved Kahan) summation.
pub fn compensated_sum<I>(values: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Locate `[lo, hi]` with `f(lo) < 0 <= f(hi)` for `f` strictly increasing on
/// `(0, inf)` and negative near zero, by geometric expansion from `start`.
pub fn bracket_increasing<F>(f: F, start: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let eval = |x: f64| {
        let y = f(x);
        if y.is_nan() {
            Err(Error::NonFinite(x))
        } else {
            Ok(y)
        }
    };
    let mut x = if start.is_finite() && start > 0.0 { start } else { 1.0 };
    if eval(x)? < 0.0 {
        for _ in 0..MAX_BRACKET_STEPS {
            let next = x * 2.0;
            if !next.is_finite() {
                break;
            }
            if eval(next)? >= 0.0 {
                return Ok((x, next));
            }
            x = next;
        }
        Err(Error::RootNotBracketed { lo: start, hi: x })
    } else {
        for _ in 0..MAX_BRACKET_STEPS {
            let next = x * 0.5;
            if next <= 0.0 {
                break;
            }
            if eval(next)? < 0.0 {
                return Ok((next, x));
            }
            x = next;
        }
        Err(Error::RootNotBracketed { lo: x, hi: start })
    }
}

/// Root of `f` inside `[lo, hi]`, where `f(lo) < 0 <= f(hi)`.
///
/// Bisects until the bracket is narrower than [`BISECTION_RTOL`] (relative),
/// then polishes with Newton steps on `df`. A Newton step that would leave the
/// current bracket is replaced by a bisection step.
pub fn solve_bracketed<F, D>(f: F, df: D, mut lo: f64, mut hi: f64, rtol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if !(flo < 0.0 && fhi >= 0.0) {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    if fhi == 0.0 {
        return Ok(hi);
    }

    while hi - lo > BISECTION_RTOL * hi.abs() {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.is_nan() {
            return Err(Error::NonFinite(mid));
        }
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON_STEPS {
        let fx = f(x);
        if fx.is_nan() {
            return Err(Error::NonFinite(x));
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = df(x);
        let mut next = x - fx / slope;
        if !(slope > 0.0) || !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= rtol * next.abs() || hi - lo <= rtol * x.abs() {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Unique positive root of a strictly increasing `f` with `f(0+) < 0`.
pub fn increasing_positive_root<F, D>(f: F, df: D, start: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (lo, hi) = bracket_increasing(&f, start)?;
    solve_bracketed(f, df, lo, hi, ROOT_RTOL)
}
