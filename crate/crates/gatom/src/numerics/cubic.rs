//! Roots of a real-coefficient cubic via the companion matrix.
//!
//! This is the fallback path behind the closed-form pole solver; it trades
//! speed for unconditional robustness.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// All three roots of a·x³ + b·x² + c·x + d = 0 as companion-matrix
/// eigenvalues, Newton-polished on the monic cubic.
pub fn companion_roots(a: f64, b: f64, c: f64, d: f64) -> Result<[Complex64; 3]> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::Numerical(format!(
            "leading cubic coefficient {a} unusable"
        )));
    }
    let (p2, p1, p0) = (b / a, c / a, d / a);
    if !(p2.is_finite() && p1.is_finite() && p0.is_finite()) {
        return Err(Error::Numerical(
            "cubic coefficients overflow after scaling".into(),
        ));
    }
    let m = Matrix3::new(
        0.0, 0.0, -p0, //
        1.0, 0.0, -p1, //
        0.0, 1.0, -p2,
    );
    let eig = m.complex_eigenvalues();
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    for (slot, ev) in roots.iter_mut().zip(eig.iter()) {
        *slot = polish_monic(Complex64::new(ev.re, ev.im), p2, p1, p0);
    }
    Ok(roots)
}

/// A few Newton steps on x³ + p2·x² + p1·x + p0, kept only while they reduce
/// the residual.
fn polish_monic(mut x: Complex64, p2: f64, p1: f64, p0: f64) -> Complex64 {
    let eval = |x: Complex64| ((x + p2) * x + p1) * x + p0;
    let deriv = |x: Complex64| (3.0 * x + 2.0 * p2) * x + p1;
    let mut best = x;
    let mut best_res = eval(x).norm();
    for _ in 0..4 {
        let d = deriv(x);
        if d.norm() == 0.0 {
            break;
        }
        x -= eval(x) / d;
        let res = eval(x).norm();
        if res < best_res {
            best = x;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        v
    }

    #[test]
    fn three_real_roots() {
        // (x-1)(x-2)(x-3)
        let r = companion_roots(1.0, -6.0, 11.0, -6.0).unwrap();
        let got = sorted(r.iter().map(|z| (z.re, z.im)).collect());
        for (g, want) in got.iter().zip([1.0, 2.0, 3.0]) {
            assert!((g.0 - want).abs() < 1e-12 && g.1.abs() < 1e-12, "{got:?}");
        }
    }

    #[test]
    fn conjugate_pair() {
        // (x+1)(x^2+1)
        let r = companion_roots(1.0, 1.0, 1.0, 1.0).unwrap();
        let mut ims = sorted(r.iter().map(|z| (z.im, z.re)).collect());
        assert!((ims[0].0 + 1.0).abs() < 1e-12 && ims[0].1.abs() < 1e-12);
        assert!((ims[2].0 - 1.0).abs() < 1e-12 && ims[2].1.abs() < 1e-12);
        let real = ims.remove(1);
        assert!((real.1 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_leading_coefficient() {
        assert!(companion_roots(0.0, 1.0, 1.0, 1.0).is_err());
    }
}
