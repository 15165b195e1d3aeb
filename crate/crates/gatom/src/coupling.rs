//! Momentum-dependent coupling g(k; N) for the three transducer models.
//!
//! `k` is the rotating-frame momentum, k = |K| − ν/c_s, so the detuning of a
//! mode is δ(k) = c_s·k. The circuit-QAD coupling is the lab-frame transducer
//! response expressed in this shifted variable; its denominator (2 + kλ/π) is
//! Kλ/π in the lab frame, which is why it is not even in k.

use crate::error::{Error, Result};
use crate::params::PhysicalConfig;

/// Which transducer response to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    /// Full circuit-QAD comb response, sin(Nkλ/2)·cot(kλ/4)/(2 + kλ/π).
    CircuitQad,
    /// Lorentzian toy model, N/((Nkλ/π)² + 1).
    Lorentzian,
    /// Top-hat toy model, N on |k| ≤ 2π/(Nλ) (band edge included), else 0.
    TopHat,
}

impl CouplingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CouplingKind::CircuitQad => "cqad",
            CouplingKind::Lorentzian => "lorentzian",
            CouplingKind::TopHat => "tophat",
        }
    }
}

impl std::str::FromStr for CouplingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cqad" | "circuit-qad" => Ok(CouplingKind::CircuitQad),
            "lorentzian" | "lor" => Ok(CouplingKind::Lorentzian),
            "tophat" | "top-hat" => Ok(CouplingKind::TopHat),
            other => Err(Error::InvalidConfig(format!(
                "unknown coupling model '{other}'"
            ))),
        }
    }
}

/// A coupling model bound to a physical configuration.
#[derive(Debug, Clone, Copy)]
pub struct CouplingModel {
    pub kind: CouplingKind,
    pub config: PhysicalConfig,
}

/// Guard under which the cot(kλ/4) factor switches to its series limit.
const SIN_GUARD: f64 = 1e-8;

impl CouplingModel {
    pub fn new(kind: CouplingKind, config: PhysicalConfig) -> Result<Self> {
        if kind == CouplingKind::CircuitQad {
            let n = config.n_size;
            if (n - n.round()).abs() > 1e-9 {
                return Err(Error::InvalidConfig(format!(
                    "circuit-QAD finger count must be an integer, got {n}"
                )));
            }
        }
        Ok(Self { kind, config })
    }

    /// sqrt(γ₁ c_s / 2π), the scale shared by all three models.
    pub fn amplitude_scale(&self) -> f64 {
        (self.config.gamma1 * self.config.c_s / crate::params::TAU).sqrt()
    }

    /// g(k; N). Real for real k; finite everywhere (removable singularities
    /// of the circuit-QAD form are evaluated by series limit).
    pub fn eval(&self, k: f64) -> f64 {
        let n = self.config.n_size;
        let lam = self.config.lambda_idt;
        let scale = self.amplitude_scale();
        match self.kind {
            CouplingKind::Lorentzian => {
                let x = n * k * lam / std::f64::consts::PI;
                scale * n / (x * x + 1.0)
            }
            CouplingKind::TopHat => {
                if k.abs() <= crate::params::TAU / (n * lam) {
                    scale * n
                } else {
                    0.0
                }
            }
            CouplingKind::CircuitQad => {
                let den = 2.0 + k * lam / std::f64::consts::PI;
                if den == 0.0 {
                    // kλ = −2π is the lab-frame K = 0 point; numerator and
                    // denominator both vanish and the limit is 0
                    return 0.0;
                }
                let t = k * lam / 4.0;
                // sin(N k λ / 2) · cot(k λ / 4), singular where sin(kλ/4) = 0;
                // for integer N the numerator vanishes there too. Reduce by
                // the nearest multiple of π so both factors are evaluated on
                // the small residual u.
                let m = (t / std::f64::consts::PI).round();
                let u = t - m * std::f64::consts::PI;
                let (su, cu) = u.sin_cos();
                let comb = if su.abs() < SIN_GUARD {
                    // sin(2Nu)·cot(u) -> 2N(1 - u²(1 + 2N²)/3) + O(u⁴)
                    2.0 * n * (1.0 - u * u * (1.0 + 2.0 * n * n) / 3.0)
                } else {
                    (2.0 * n * u).sin() * cu / su
                };
                scale * comb / den
            }
        }
    }

    /// Half-width scale of the response, 2π/(Nλ) for every model.
    pub fn bandwidth(&self) -> f64 {
        crate::params::TAU / (self.config.n_size * self.config.lambda_idt)
    }
}
