//! Pseudo-spectral simulation and decay-rate analysis for the 2D anisotropic
//! fractional conservation law
//!
//! ```text
//! u_t + Λ_x^{α₁} u + Λ_y^{α₂} u + ∂_x f(u) + ∂_y f(u) = 0,   f(u) = u^{1+κ}/(1+κ)
//! ```
//!
//! on a large periodic box standing in for ℝ².

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decay;
pub mod error;
pub mod ineq;
pub mod io;
pub mod norms;
pub mod operators;
pub mod spectral;
pub mod split;
pub mod timestepper;

pub use error::{Error, Result};
pub use spectral::{Axis, GridSpec, PhysicalField, SpectralField};
