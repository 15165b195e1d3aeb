//! Relaxation of a spatially extended ("giant") atom coupled to a 1-D phonon
//! continuum through a surface-acoustic-wave transducer.
//!
//! The crate covers the full pipeline at desk scale:
//!
//! * [`params`] — natural-unit system configuration and the piezoelectric
//!   material chain mapping substrate constants to the single-cell rate γ₁;
//! * [`coupling`] — the momentum-dependent coupling g(k; N) for the
//!   circuit-QAD comb, its Lorentzian simplification, and a top-hat model;
//! * [`poles`] — response-function poles in closed form, the transition size
//!   N_T, relaxation rates, Rabi wavelengths, χ(s) by adaptive quadrature,
//!   residue reconstruction, and the top-hat bound states in the continuum;
//! * [`dynamics`] — single-excitation time evolution on a discretized
//!   momentum grid with real-space phonon envelopes;
//! * [`spectral`] — power spectra of α(t), peak extraction, phase-matched
//!   bounded sizes, and scans across atom size;
//! * [`config`] — the key/value config-file format shared with the CLI.

// Validation deliberately uses the negated forms (`!(x > 0.0)`) so NaN inputs
// fail closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod numerics;
pub mod params;
pub mod poles;
pub mod spectral;

pub use coupling::{CouplingKind, CouplingModel};
pub use error::{Error, Result};
pub use params::{
    derive_material, to_natural_units, DerivedMaterial, MaterialInput, PhysicalConfig,
};
pub use poles::PoleSet;
