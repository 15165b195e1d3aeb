//! Poles of the response function χ(s) and quantities derived from them.
//!
//! For the Lorentzian coupling the pole condition
//!
//! ```text
//! s + N²γ₁ν(Ns + ν)/(ν + 2Ns)² = 0
//! ```
//!
//! expands to the real-coefficient cubic
//! 4N²s³ + 4Nνs² + (ν² + N³γ₁ν)s + N²γ₁ν² = 0, solved in closed form
//! (Cardano radical with the three cube-root phases), validated by
//! substitution, and Newton-polished. χ(s) itself is evaluated by adaptive
//! quadrature for any coupling model on Re(s) > 0.

use num_complex::Complex64;

use crate::coupling::{CouplingKind, CouplingModel};
use crate::error::{Error, Result};
use crate::numerics::{bisect, cubic, quad};
use crate::params::PhysicalConfig;

/// Allowed pole-equation residual, relative to ν.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Allowed causality violation Re(s) ≤ CAUSALITY_TOL·ν.
pub const CAUSALITY_TOL: f64 = 1e-10;
/// Pole separation below which the simple-pole residue formula is refused,
/// relative to ν.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// The three response-function poles for the Lorentzian model, with the
/// derived long-time rate and oscillation frequency.
#[derive(Debug, Clone, Copy)]
pub struct PoleSet {
    /// Roots sorted by (Im, Re); conjugate pairs are exactly symmetric.
    pub roots: [Complex64; 3],
    /// Min over roots of −2·Re(s), the long-time relaxation rate.
    pub gamma_eff: f64,
    /// Max over roots of Im(s); zero below the transition point.
    pub rabi_freq: f64,
    pub n_size: f64,
    pub nu: f64,
    pub gamma1: f64,
}

/// Pole equation in rational form. The two linear forms are evaluated with
/// fused multiply-adds: near the small real root at large N they cancel to
/// ~1e-13·ν and the residual derivative reaches 1 + N³γ₁/ν, so naive
/// rounding there masquerades as an O(1) residual.
fn pole_equation(s: Complex64, nu: f64, gamma1: f64, n: f64) -> Complex64 {
    let ns_nu = Complex64::new(n.mul_add(s.re, nu), n * s.im);
    let den = Complex64::new((2.0 * n).mul_add(s.re, nu), 2.0 * n * s.im);
    s + n * n * gamma1 * nu * ns_nu / (den * den)
}

fn pole_equation_deriv(s: Complex64, nu: f64, gamma1: f64, n: f64) -> Complex64 {
    let den = Complex64::new((2.0 * n).mul_add(s.re, nu), 2.0 * n * s.im);
    let num = Complex64::new((-2.0 * n).mul_add(s.re, -3.0 * nu), -2.0 * n * s.im);
    Complex64::new(1.0, 0.0) + n.powi(3) * gamma1 * nu * num / (den * den * den)
}

fn newton_polish(mut s: Complex64, nu: f64, gamma1: f64, n: f64) -> Complex64 {
    let mut best = s;
    let mut best_res = pole_equation(s, nu, gamma1, n).norm();
    for _ in 0..6 {
        let d = pole_equation_deriv(s, nu, gamma1, n);
        if d.norm() == 0.0 {
            break;
        }
        s -= pole_equation(s, nu, gamma1, n) / d;
        let res = pole_equation(s, nu, gamma1, n).norm();
        if res < best_res {
            best = s;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

/// Closed-form roots: s_n = −ν/3N + ω⁻ⁿ·ν(ν − 3γ₁N³)/(6A) + ωⁿ·A/(6N²),
/// A³ = ν³N³ − 18γ₁ν²N⁶ + 3√3·√(γ₁ν³N⁹(γ₁²N⁶ + 11γ₁νN³ − ν²)).
fn closed_form_roots(nu: f64, gamma1: f64, n: f64, flip_sqrt: bool) -> [Complex64; 3] {
    let n3 = n.powi(3);
    let inner = gamma1
        * nu.powi(3)
        * n.powi(9)
        * (gamma1 * gamma1 * n.powi(6) + 11.0 * gamma1 * nu * n3 - nu * nu);
    let mut sq = Complex64::new(inner, 0.0).sqrt();
    if flip_sqrt {
        sq = -sq;
    }
    let a3 = Complex64::new(nu.powi(3) * n3 - 18.0 * gamma1 * nu * nu * n.powi(6), 0.0)
        + 3.0 * 3.0f64.sqrt() * sq;
    let a = a3.cbrt();
    let v_num = nu * (nu - 3.0 * gamma1 * n3);
    let mut roots = [Complex64::default(); 3];
    for (idx, slot) in roots.iter_mut().enumerate() {
        let phase = crate::params::TAU * (idx as f64 + 1.0) / 3.0;
        let w = Complex64::from_polar(1.0, phase);
        *slot = -nu / (3.0 * n) + v_num / (6.0 * a * w) + a * w / (6.0 * n * n);
    }
    roots
}

/// Snap conjugate structure: real-coefficient cubics have either three real
/// roots or one real root plus an exact conjugate pair. Rounding noise in the
/// complex radicals is cleaned up so "Im = 0 below the transition" holds
/// exactly.
fn canonicalize(mut roots: [Complex64; 3], nu: f64) -> [Complex64; 3] {
    for r in roots.iter_mut() {
        let scale = r.norm().max(1e-3 * nu);
        if r.im.abs() < 4e-12 * scale {
            r.im = 0.0;
        }
        if r.re > 0.0 && r.re < 4e-12 * scale {
            r.re = 0.0;
        }
    }
    let complex_idx: Vec<usize> = (0..3).filter(|&i| roots[i].im != 0.0).collect();
    if complex_idx.len() == 2 {
        let (i, j) = (complex_idx[0], complex_idx[1]);
        let re = 0.5 * (roots[i].re + roots[j].re);
        let im = 0.5 * (roots[i].im.abs() + roots[j].im.abs());
        roots[i] = Complex64::new(re, -im);
        roots[j] = Complex64::new(re, im);
    }
    roots.sort_by(|a, b| (a.im, a.re).partial_cmp(&(b.im, b.re)).unwrap());
    roots
}

fn validate(roots: &[Complex64; 3], nu: f64, gamma1: f64, n: f64) -> bool {
    roots.iter().all(|&s| {
        // One ulp of the root moves the residual by |f'(s)|·ulp(|s|); at
        // extreme N that quantum exceeds 1e-9·ν (f' = 1 + N³γ₁/ν at the slow
        // real root), so accept roots that are exact to the last digit.
        let quantum = pole_equation_deriv(s, nu, gamma1, n).norm() * f64::EPSILON * s.norm();
        let tol = RESIDUAL_TOL * nu + 4.0 * quantum;
        pole_equation(s, nu, gamma1, n).norm() < tol && s.re <= CAUSALITY_TOL * nu
    })
}

/// Solve the pole cubic for the Lorentzian model.
///
/// Branch policy: closed form with the principal square root, then the
/// flipped square root (the principal branch hits an exact cancellation
/// A = 0 at N = (ν/3γ₁)^⅓), then a companion-matrix solve. Every candidate
/// set is Newton-polished and validated by substitution.
pub fn lorentzian_poles(cfg: &PhysicalConfig) -> Result<PoleSet> {
    let (nu, gamma1, n) = (cfg.nu, cfg.gamma1, cfg.n_size);
    if !(n >= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "n_size must be >= 1, got {n}"
        )));
    }

    let mut candidates: Vec<[Complex64; 3]> = vec![
        closed_form_roots(nu, gamma1, n, false),
        closed_form_roots(nu, gamma1, n, true),
    ];
    if let Ok(fallback) = cubic::companion_roots(
        4.0 * n * n,
        4.0 * n * nu,
        nu * nu + n.powi(3) * gamma1 * nu,
        n * n * gamma1 * nu * nu,
    ) {
        candidates.push(fallback);
    }

    for cand in candidates {
        let polished = cand.map(|s| newton_polish(s, nu, gamma1, n));
        let roots = canonicalize(polished, nu);
        if validate(&roots, nu, gamma1, n) {
            let gamma_eff = roots
                .iter()
                .map(|s| -2.0 * s.re)
                .fold(f64::INFINITY, f64::min);
            let rabi_freq = roots.iter().map(|s| s.im).fold(0.0, f64::max);
            return Ok(PoleSet {
                roots,
                gamma_eff,
                rabi_freq,
                n_size: n,
                nu,
                gamma1,
            });
        }
    }
    Err(Error::Numerical(format!(
        "pole residual validation failed for N = {n}, gamma1 = {gamma1:e}"
    )))
}

/// Transition size N_T = ((5√5 − 11)ν/2γ₁)^⅓ where the slow pole pair merges.
pub fn transition_point(gamma1: f64, nu: f64) -> Result<f64> {
    if !(gamma1 > 0.0) {
        return Err(Error::Domain(format!(
            "gamma1 must be positive, got {gamma1}"
        )));
    }
    if !(nu > 0.0) {
        return Err(Error::Domain(format!("nu must be positive, got {nu}")));
    }
    Ok(((5.0 * 5.0f64.sqrt() - 11.0) * nu / (2.0 * gamma1)).cbrt())
}

/// Long-time relaxation rate γ = Min_n[−2Re(s_n)].
pub fn relaxation_rate(p: &PoleSet) -> f64 {
    p.gamma_eff
}

/// Effective vacuum Rabi wavelength λ_R = 2πc_s/Max_n[Im s_n], or `None`
/// below the transition where no pole oscillates.
pub fn rabi_wavelength(p: &PoleSet, c_s: f64) -> Option<f64> {
    if p.rabi_freq > 0.0 {
        Some(crate::params::TAU * c_s / p.rabi_freq)
    } else {
        None
    }
}

/// Point-atom spontaneous emission rate 4π|g₀|²/c_s.
pub fn weisskopf_wigner_rate(g0: f64, c_s: f64) -> f64 {
    4.0 * std::f64::consts::PI * g0 * g0 / c_s
}

/// α(t) = Σ_n Res_n·exp(s_n t) from the rational χ of the Lorentzian model:
/// χ = (ν + 2Ns)² / (4N²s³ + 4Nνs² + (ν² + N³γ₁ν)s + N²γ₁ν²).
pub fn residue_reconstruct(p: &PoleSet, t: f64) -> Result<Complex64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    let (nu, gamma1, n) = (p.nu, p.gamma1, p.n_size);
    for i in 0..3 {
        for j in (i + 1)..3 {
            let sep = (p.roots[i] - p.roots[j]).norm();
            if sep < DEGENERACY_TOL * nu {
                return Err(Error::DegeneratePoles {
                    separation: sep,
                    threshold: DEGENERACY_TOL * nu,
                });
            }
        }
    }
    let mut alpha = Complex64::default();
    for &s in &p.roots {
        let num = (nu + 2.0 * n * s).powi(2);
        let dq = 12.0 * n * n * s * s + 8.0 * n * nu * s + (nu * nu + n.powi(3) * gamma1 * nu);
        alpha += num / dq * (s * t).exp();
    }
    Ok(alpha)
}

/// Residues alone (same ordering as `PoleSet::roots`).
pub fn residues(p: &PoleSet) -> Result<[Complex64; 3]> {
    let (nu, gamma1, n) = (p.nu, p.gamma1, p.n_size);
    let mut out = [Complex64::default(); 3];
    for (slot, &s) in out.iter_mut().zip(&p.roots) {
        let dq = 12.0 * n * n * s * s + 8.0 * n * nu * s + (nu * nu + n.powi(3) * gamma1 * nu);
        if dq.norm() == 0.0 {
            return Err(Error::DegeneratePoles {
                separation: 0.0,
                threshold: DEGENERACY_TOL * nu,
            });
        }
        *slot = (nu + 2.0 * n * s).powi(2) / dq;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// response function by quadrature
// ---------------------------------------------------------------------------

/// Self-energy integral Σ(s) = 2∫dk |g(k)|²/(s + i·c_s·k) on the integration
/// contour through real k. For Re(s) > 0 this is the response-function
/// denominator correction; for Re(s) < 0 it is the same-sheet integral (not
/// the analytic continuation across the imaginary axis).
pub fn self_energy(model: &CouplingModel, s: Complex64) -> Result<quad::Quadrature> {
    if s.re == 0.0 {
        return Err(Error::Domain(
            "self-energy integral undefined on Re(s) = 0".into(),
        ));
    }
    let c = model.config.c_s;
    let lam = model.config.lambda_idt;
    let n = model.config.n_size;
    let integrand = move |k: f64| {
        let g = model.eval(k);
        Complex64::new(2.0 * g * g, 0.0) / (s + Complex64::new(0.0, c * k))
    };
    // point of closest approach to the contour pole
    let k_star = -s.im / c;

    let bandwidth = model.bandwidth();
    let (k_max, tail, rel_tol, max_panels, mut bounds): (f64, f64, f64, usize, Vec<f64>);
    match model.kind {
        CouplingKind::TopHat => {
            k_max = bandwidth;
            tail = 0.0;
            rel_tol = 1e-10;
            max_panels = 16_384;
            bounds = vec![-k_max, 0.0, k_max];
        }
        CouplingKind::Lorentzian => {
            // |g|² falls to 1e-12 of its peak at a·k = 1000, a = Nλ/π
            let w = std::f64::consts::PI / (n * lam);
            k_max = 1000.0 * w;
            let d_min = s.re.abs().max(c * k_max - s.im.abs()).max(s.re.abs());
            let g_edge = model.eval(k_max);
            tail = 2.0 * 2.0 * g_edge * g_edge * k_max / (3.0 * d_min);
            rel_tol = 1e-9;
            max_panels = 32_768;
            bounds = vec![0.0, w, 4.0 * w, 16.0 * w, 64.0 * w, 256.0 * w, k_max];
            let mirror: Vec<f64> = bounds.iter().map(|&b| -b).collect();
            bounds.extend(mirror);
        }
        CouplingKind::CircuitQad => {
            // |g(k)| ≤ scale·2N/|2 + kλ/π|, so the tail beyond K contributes
            // at most 16·scale²N²π²/(λ²cK²); pick K for 1e-6 of the small-s
            // self-energy N²γ₁ and report the bound with the result.
            let rel_target = 1e-6;
            k_max = ((8.0 * std::f64::consts::PI / rel_target).sqrt() / lam).max(8.0 * bandwidth);
            let scale = model.amplitude_scale();
            tail = 16.0 * scale * scale * n * n * std::f64::consts::PI.powi(2)
                / (lam * lam * c * k_max * k_max);
            rel_tol = 1e-8;
            let n_panels = (2.0 * k_max / bandwidth).ceil() as usize;
            max_panels = n_panels + 16_384;
            bounds = Vec::with_capacity(n_panels + 2);
            let mut k = -k_max;
            while k < k_max {
                bounds.push(k);
                k += bandwidth;
            }
            bounds.push(k_max);
        }
    }
    if k_star > -k_max && k_star < k_max {
        bounds.push(k_star);
    }
    bounds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bounds.dedup();
    let seeds: Vec<(f64, f64)> = bounds
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    quad::integrate_panels(integrand, &seeds, rel_tol, 1e-14, tail, max_panels)
}

/// Closed form of the Lorentzian self-energy, N²γ₁ν(Ns + ν)/(ν + 2Ns)².
pub fn lorentzian_self_energy(cfg: &PhysicalConfig, s: Complex64) -> Complex64 {
    let (nu, gamma1, n) = (cfg.nu, cfg.gamma1, cfg.n_size);
    n * n * gamma1 * nu * (n * s + nu) / (nu + 2.0 * n * s).powi(2)
}

/// Response function χ(s) = 1/(s + Σ(s)) by adaptive quadrature.
///
/// Defined on the Laplace region of convergence Re(s) > 0.
pub fn chi_eval(model: &CouplingModel, s: Complex64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!(
            "chi is defined for Re(s) > 0, got Re(s) = {}",
            s.re
        )));
    }
    let sigma = self_energy(model, s)?;
    Ok(Complex64::new(1.0, 0.0) / (s + sigma.value))
}

// ---------------------------------------------------------------------------
// top-hat bound states in the continuum
// ---------------------------------------------------------------------------

/// Left-hand side of the top-hat purely-imaginary pole condition,
/// 2πω + N²γ₁·ln[((ν − Nω)/(ν + Nω))²], defined for |ω| ≠ ν/N.
pub fn tophat_bic_equation(cfg: &PhysicalConfig, omega: f64) -> f64 {
    let (nu, gamma1, n) = (cfg.nu, cfg.gamma1, cfg.n_size);
    let ratio = (nu - n * omega) / (nu + n * omega);
    crate::params::TAU * omega + 2.0 * n * n * gamma1 * ratio.abs().ln()
}

/// The pair of purely imaginary poles s = iω of the top-hat model, returned
/// as (ω₁, ω₂) with ω₁ = −ω₂ < −ν/N < ν/N < ω₂.
///
/// The positive root is bracketed from the band edge (where the equation
/// diverges to −∞) by geometric expansion, then bisected until the residual
/// drops below 1e-10·ν.
pub fn tophat_bic_roots(cfg: &PhysicalConfig) -> Result<(f64, f64)> {
    let (nu, gamma1, n) = (cfg.nu, cfg.gamma1, cfg.n_size);
    if !(gamma1 > 0.0) || !(n >= 1.0) {
        return Err(Error::InvalidConfig(
            "need gamma1 > 0 and n_size >= 1".into(),
        ));
    }
    let edge = nu / n;
    let f = |w: f64| tophat_bic_equation(cfg, w);
    let lo = edge * (1.0 + 1e-13);
    if !(f(lo) < 0.0) {
        return Err(Error::Numerical(format!(
            "band-edge value f({lo:e}) = {:e} is not negative; root is closer to the edge \
             than f64 resolution (N³γ₁/ν = {:e} too small)",
            f(lo),
            n.powi(3) * gamma1 / nu
        )));
    }
    let (blo, bhi) = bisect::expand_bracket(f, lo, edge * 2.0, 1e6 * edge)?;
    let omega2 = bisect::bisect(f, blo.max(lo), bhi, 0.0, 1e-10 * nu)?;
    if f(omega2).abs() >= RESIDUAL_TOL * nu {
        return Err(Error::Numerical(format!(
            "bisection stalled at residual {:e}",
            f(omega2).abs()
        )));
    }
    Ok((-omega2, omega2))
}
