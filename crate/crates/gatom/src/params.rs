//! Unit system and physical configuration shared by every other module,
//! including the SAW transducer material-parameter chain.
//!
//! Internally everything runs in natural units: the transducer wavelength is
//! λ = 1 and its fundamental period is T = 1, hence c_s = 1 and ν = 2π. SI
//! quantities appear only in [`MaterialInput`] / [`DerivedMaterial`], which
//! map a piezoelectric substrate to the effective 1-D constants and the
//! single-cell relaxation rate γ₁.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const TAU: f64 = std::f64::consts::TAU;

/// System parameters in natural units (λ = 1, T = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    /// Atomic transition frequency (rad per period); 2π in natural units.
    pub nu: f64,
    /// Single-cell weak-coupling relaxation rate, same units as `nu`.
    pub gamma1: f64,
    /// Transducer characteristic wavelength; always 2π·c_s/ν.
    pub lambda_idt: f64,
    /// Speed of sound.
    pub c_s: f64,
    /// Atom size (finger count). Real-valued; circuit-QAD evaluation
    /// additionally requires it to be an integer.
    pub n_size: f64,
}

impl PhysicalConfig {
    /// Natural-unit config: ν = 2π, c_s = 1, λ = 1.
    ///
    /// `gamma1_rel` is γ₁/ν.
    pub fn natural(gamma1_rel: f64, n_size: f64) -> Result<Self> {
        Self::new(TAU, gamma1_rel * TAU, 1.0, n_size)
    }

    pub fn new(nu: f64, gamma1: f64, c_s: f64, n_size: f64) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "nu must be positive, got {nu}"
            )));
        }
        if !(gamma1 > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gamma1 must be positive, got {gamma1}"
            )));
        }
        if !(c_s > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "c_s must be positive, got {c_s}"
            )));
        }
        if !(n_size >= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "n_size must be >= 1, got {n_size}"
            )));
        }
        Ok(Self {
            nu,
            gamma1,
            // resonance condition: the IDT period matches the transition
            lambda_idt: TAU * c_s / nu,
            c_s,
            n_size,
        })
    }

    pub fn with_n_size(mut self, n_size: f64) -> Result<Self> {
        if !(n_size >= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "n_size must be >= 1, got {n_size}"
            )));
        }
        self.n_size = n_size;
        Ok(self)
    }

    /// γ₁/ν.
    pub fn gamma1_rel(&self) -> f64 {
        self.gamma1 / self.nu
    }
}

/// Substrate and transducer inputs, all in base SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialInput {
    /// Mass density, kg/m³.
    pub rho: f64,
    /// Elastic constants, N/m².
    pub c11: f64,
    pub c12: f64,
    pub c44: f64,
    /// Piezoelectric constant, C/m² (sign free).
    pub e14: f64,
    /// Surface-mode depth-decay fit parameter (dimensionless, Re > 0).
    pub q: Complex64,
    /// Surface-mode amplitude-ratio fit parameter (dimensionless).
    pub r: Complex64,
    /// Surface-mode phase fit parameter, radians.
    pub phi: f64,
    /// Transducer width, m.
    pub width: f64,
    /// Total capacitance, F.
    pub c_sigma: f64,
    /// Transition frequency, rad/s.
    pub nu_si: f64,
}

impl MaterialInput {
    /// GaAs parameters with the transducer geometry used throughout.
    pub fn gaas() -> Self {
        Self {
            rho: 5307.0,
            c11: 12.26e10,
            c12: 5.71e10,
            c44: 6.00e10,
            e14: 0.157,
            q: Complex64::new(0.5, 0.48),
            r: Complex64::new(-0.68, 1.16),
            phi: 1.05,
            width: 50e-6,
            c_sigma: 2.5e-11,
            nu_si: 5e9,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.q.re > 0.0) {
            return Err(Error::Domain(format!(
                "Re(q) must be positive (mode must decay into the substrate), got {}",
                self.q.re
            )));
        }
        for (name, v) in [
            ("rho", self.rho),
            ("c11", self.c11),
            ("c12", self.c12),
            ("c44", self.c44),
            ("width", self.width),
            ("c_sigma", self.c_sigma),
            ("nu_si", self.nu_si),
        ] {
            if !(v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.e14.is_finite() || !self.phi.is_finite() {
            return Err(Error::Domain("e14 and phi must be finite".into()));
        }
        Ok(())
    }
}

/// Effective 1-D constants derived from [`MaterialInput`], all SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedMaterial {
    /// Effective density, kg/m³.
    pub rho_prime: f64,
    /// Effective elastic constant, N/m².
    pub c_prime: f64,
    /// Effective piezoelectric constant, C/m².
    pub e_prime: f64,
    /// Surface-wave speed sqrt(c′/ρ′), m/s.
    pub c_s_si: f64,
    /// Vacuum coupling, √m·rad/s.
    pub g0: f64,
    /// Single-cell relaxation rate 4πg₀²/c_s, rad/s.
    pub gamma1_si: f64,
}

impl DerivedMaterial {
    /// g₀ in the √μm·MHz display unit.
    pub fn g0_microunits(&self) -> f64 {
        self.g0 * 1e-3
    }
}

/// Relative imaginary residue allowed when assembling the (physically real)
/// effective elastic constant in complex arithmetic.
const C_PRIME_IMAG_TOL: f64 = 1e-9;

/// Map substrate inputs to the effective 1-D constants and γ₁.
///
/// The elastic combination is assembled in complex arithmetic and checked to
/// be real, which catches transcription errors in the cross terms. The 1/(2Re q)
/// factor is the depth normalization ∫₀^∞ e^{−2Re(q)Kz} dz of the surface mode.
pub fn derive_material(m: &MaterialInput) -> Result<DerivedMaterial> {
    m.validate()?;
    let q = m.q;
    let r = m.r;
    let r2 = r.norm_sqr();
    let q2 = q.norm_sqr();
    let depth_norm = 2.0 * q.re;

    let rho_prime = m.rho * (1.0 + r2) / depth_norm;

    let c11p = (m.c11 + m.c12 + 2.0 * m.c44) / 2.0;
    let cross = Complex64::i()
        * (m.c12 * (r.conj() * q.conj() - r * q) + m.c44 * (r * q.conj() - r.conj() * q));
    let c_num = Complex64::new(c11p + m.c44 * r2 + (m.c11 + m.c44 * r2) * q2, 0.0) + cross;
    if c_num.im.abs() > C_PRIME_IMAG_TOL * c_num.re.abs() {
        return Err(Error::InvalidMaterial(format!(
            "effective elastic constant has imaginary residue {:e} of {:e}",
            c_num.im, c_num.re
        )));
    }
    let c_prime = c_num.re / depth_norm;

    if !(rho_prime > 0.0) {
        return Err(Error::InvalidMaterial(format!(
            "effective density {rho_prime} is not positive"
        )));
    }
    if !(c_prime > 0.0) {
        return Err(Error::InvalidMaterial(format!(
            "effective elastic constant {c_prime} is not positive"
        )));
    }

    let e_prime = 8.0 * m.e14 * ((Complex64::i() - r / q) * Complex64::from_polar(1.0, -m.phi)).re;

    let c_s_si = (c_prime / rho_prime).sqrt();
    let g0 = e_prime
        * (std::f64::consts::PI * m.width * m.nu_si
            / (2.0 * m.c_sigma * (c_prime * rho_prime).sqrt()))
        .sqrt();
    let gamma1_si = 4.0 * std::f64::consts::PI * g0 * g0 / c_s_si;

    Ok(DerivedMaterial {
        rho_prime,
        c_prime,
        e_prime,
        c_s_si,
        g0,
        gamma1_si,
    })
}

/// Normalize a derived material to natural units (λ = 1, T = 1, so ν = 2π,
/// c_s = 1) at the given SI transition frequency.
///
/// The atom size is not a material property; the result carries n_size = 1
/// and callers override it with [`PhysicalConfig::with_n_size`].
pub fn to_natural_units(d: &DerivedMaterial, nu_si: f64) -> Result<PhysicalConfig> {
    if !(nu_si > 0.0) {
        return Err(Error::Domain(format!(
            "nu_si must be positive, got {nu_si}"
        )));
    }
    if d.gamma1_si < 0.0 {
        return Err(Error::Domain(format!(
            "gamma1_si must be non-negative, got {}",
            d.gamma1_si
        )));
    }
    let gamma1 = d.gamma1_si / nu_si * TAU;
    if gamma1 == 0.0 {
        // zero-coupling edge: keep the type invariants except gamma1 > 0 is
        // relaxed to >= 0 for this constructor-free path
        return Ok(PhysicalConfig {
            nu: TAU,
            gamma1: 0.0,
            lambda_idt: 1.0,
            c_s: 1.0,
            n_size: 1.0,
        });
    }
    PhysicalConfig::new(TAU, gamma1, 1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gaas_reproduces_reported_constants() {
        let d = derive_material(&MaterialInput::gaas()).unwrap();
        assert!(rel(d.rho_prime, 14902.0) < 0.01, "rho' = {}", d.rho_prime);
        assert!(rel(d.c_prime, 28.73e10) < 0.01, "c' = {}", d.c_prime);
        assert!(rel(d.e_prime, -1.248) < 0.01, "e' = {}", d.e_prime);
        assert!(rel(d.c_s_si, 4391.0) < 0.01, "c_s = {}", d.c_s_si);
        assert!(
            rel(d.g0_microunits(), -19.34) < 0.01,
            "g0 = {}",
            d.g0_microunits()
        );
        assert!(
            rel(d.gamma1_si, 0.34 * std::f64::consts::PI * 1e6) < 0.01,
            "gamma1 = {}",
            d.gamma1_si
        );
    }

    #[test]
    fn gaas_natural_units_rate() {
        let m = MaterialInput::gaas();
        let d = derive_material(&m).unwrap();
        let cfg = to_natural_units(&d, m.nu_si).unwrap();
        assert_eq!(cfg.nu, TAU);
        assert_eq!(cfg.c_s, 1.0);
        assert_eq!(cfg.lambda_idt, 1.0);
        // gamma1 ~ 6.8e-5 pi nu
        assert!(rel(cfg.gamma1_rel(), 6.8e-5 * std::f64::consts::PI) < 0.01);
    }

    #[test]
    fn zero_piezo_kills_coupling() {
        let m = MaterialInput {
            e14: 0.0,
            ..MaterialInput::gaas()
        };
        let d = derive_material(&m).unwrap();
        assert_eq!(d.e_prime, 0.0);
        assert_eq!(d.g0, 0.0);
        assert_eq!(d.gamma1_si, 0.0);
        let cfg = to_natural_units(&d, m.nu_si).unwrap();
        assert_eq!(cfg.gamma1, 0.0);
    }

    #[test]
    fn trivial_mode_shape() {
        // r = 0, q = 1, phi = 0: e' = 8 e14 Re[i] = 0; rho' = rho/2 with the
        // depth normalization 1/(2 Re q).
        let m = MaterialInput {
            q: Complex64::new(1.0, 0.0),
            r: Complex64::new(0.0, 0.0),
            phi: 0.0,
            ..MaterialInput::gaas()
        };
        let d = derive_material(&m).unwrap();
        assert_eq!(d.e_prime, 0.0);
        assert!((d.rho_prime - m.rho / 2.0).abs() < 1e-12 * m.rho);
    }

    #[test]
    fn gamma1_roundtrip_and_piezo_scaling() {
        let base = derive_material(&MaterialInput::gaas()).unwrap();
        let recomputed = 4.0 * std::f64::consts::PI * base.g0 * base.g0 / base.c_s_si;
        assert!(rel(recomputed, base.gamma1_si) < 1e-12);

        let f = 3.0;
        let scaled = derive_material(&MaterialInput {
            e14: 0.157 * f,
            ..MaterialInput::gaas()
        })
        .unwrap();
        assert!(rel(scaled.g0, f * base.g0) < 1e-12);
        assert!(rel(scaled.gamma1_si, f * f * base.gamma1_si) < 1e-12);
    }

    #[test]
    fn rejects_bad_domain() {
        let m = MaterialInput {
            q: Complex64::new(-0.1, 0.4),
            ..MaterialInput::gaas()
        };
        assert!(matches!(derive_material(&m), Err(Error::Domain(_))));

        let d = derive_material(&MaterialInput::gaas()).unwrap();
        assert!(matches!(to_natural_units(&d, 0.0), Err(Error::Domain(_))));
        assert!(matches!(to_natural_units(&d, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn natural_units_ratio_preservation() {
        let d = DerivedMaterial {
            rho_prime: 1.0,
            c_prime: 1.0,
            e_prime: 1.0,
            c_s_si: 1.0,
            g0: 1.0,
            gamma1_si: 5e9,
        };
        // gamma1_si = nu_si -> gamma1 = nu
        let cfg = to_natural_units(&d, 5e9).unwrap();
        assert!((cfg.gamma1 - cfg.nu).abs() < 1e-12);
    }

    #[test]
    fn config_invariants() {
        let cfg = PhysicalConfig::natural(1e-5, 30.0).unwrap();
        assert_eq!(cfg.lambda_idt, TAU * cfg.c_s / cfg.nu);
        assert!(PhysicalConfig::natural(0.0, 1.0).is_err());
        assert!(PhysicalConfig::natural(1e-5, 0.5).is_err());
    }
}
