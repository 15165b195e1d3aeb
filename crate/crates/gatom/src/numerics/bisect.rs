//! Bracketed bisection for monotone-enough 1-D root finding.

use crate::error::{Error, Result};

/// Bisect `f` on `[lo, hi]`, requiring a sign change. Converges on the
/// bracket width `tol_x` or on `|f| <= tol_f`, whichever comes first.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, tol_x: f64, tol_f: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSolution(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {flo:e}, f(hi) = {fhi:e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid.abs() <= tol_f || (hi - lo).abs() <= tol_x {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Grow `hi` geometrically from `lo` until `f` changes sign against `f(lo)`,
/// capping at `hi_max`.
pub fn expand_bracket<F>(f: F, lo: f64, hi0: f64, hi_max: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let flo = f(lo);
    let mut hi = hi0;
    let mut prev = lo;
    while hi <= hi_max {
        if f(hi).signum() != flo.signum() {
            return Ok((prev, hi));
        }
        prev = hi;
        hi *= 2.0;
    }
    Err(Error::Numerical(format!(
        "bracket expansion exceeded {hi_max:e} without sign change"
    )))
}
