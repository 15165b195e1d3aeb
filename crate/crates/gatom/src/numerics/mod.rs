//! Low-level numerical routines: cubic roots, adaptive quadrature, bisection.

pub mod bisect;
pub mod cubic;
pub mod quad;
