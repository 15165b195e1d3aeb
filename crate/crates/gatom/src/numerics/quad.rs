//! Adaptive Gauss–Kronrod (G7–K15) quadrature for complex-valued integrands
//! on a union of finite panels, refining the worst panel first.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half) and weights, 7-point Gauss
// weights embedded at the odd abscissae. Tabulated at full published
// precision; f64 rounds them.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839998060075660,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    /// Estimated absolute error, including any caller-supplied tail bound.
    pub err: f64,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

fn gk15<F>(f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_kronrod = f_center * WGK[7];
    let mut res_gauss = f_center * WG[3];
    let mut res_abs = f_center.norm() * WGK[7];

    let mut fv = [Complex64::default(); 15];
    fv[7] = f_center;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        res_kronrod += sum * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            res_gauss += sum * WG[j / 2];
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = (f_center - mean).norm() * WGK[7];
    for (j, &v) in fv.iter().enumerate() {
        if j != 7 {
            res_asc += (v - mean).norm() * WGK[j.min(14 - j)];
        }
    }

    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let raw = ((res_kronrod - res_gauss) * half).norm();
    // QUADPACK-style error rescaling
    let mut err = raw;
    if res_asc != 0.0 && raw != 0.0 {
        err = res_asc * (200.0 * raw / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if floor > err {
        err = floor;
    }
    Panel { a, b, value, err }
}

/// Integrate `f` over the given panels, splitting the worst panel until the
/// summed panel error meets the tolerance. `tail_bound` is the caller's
/// truncation bound for the omitted region; it is added to the reported
/// error but does not participate in convergence.
pub fn integrate_panels<F>(
    f: F,
    seeds: &[(f64, f64)],
    rel_tol: f64,
    abs_tol: f64,
    tail_bound: f64,
    max_panels: usize,
) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    if seeds.is_empty() {
        return Err(Error::Numerical(
            "quadrature needs at least one panel".into(),
        ));
    }
    let mut heap: BinaryHeap<Panel> = seeds.iter().map(|&(a, b)| gk15(&f, a, b)).collect();
    loop {
        let value: Complex64 = heap.iter().map(|p| p.value).sum();
        let err: f64 = heap.iter().map(|p| p.err).sum();
        let target = abs_tol.max(rel_tol * value.norm());
        if err <= target {
            return Ok(Quadrature {
                value,
                err: err + tail_bound,
            });
        }
        if heap.len() >= max_panels {
            return Err(Error::Numerical(format!(
                "quadrature did not converge: residual estimate {err:e} above target {target:e} \
                 with {} panels",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at f64 resolution; accept its estimate as-is
            let mut rest: Complex64 = heap.iter().map(|p| p.value).sum();
            rest += worst.value;
            let rest_err: f64 = heap.iter().map(|p| p.err).sum::<f64>() + worst.err + tail_bound;
            return Ok(Quadrature {
                value: rest,
                err: rest_err,
            });
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
    }
}
