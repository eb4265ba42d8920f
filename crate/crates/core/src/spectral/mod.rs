//! Periodic grid, Fourier conventions and dealiasing.
//!
//! The forward transform carries the `dx·dy` quadrature weight so that
//! coefficients approximate the continuous transform `∫ u e^{−ix·ξ} dx`,
//! and `|û(ξ)| ≤ ‖u‖_{L¹}` holds on the lattice.

mod fft;
mod field;
mod grid;

pub use field::{
    dealias, dealias_for, forward_transform, inverse_transform, retained_band, PhysicalField,
    SpectralField, HERMITIAN_TOLERANCE,
};
pub(crate) use field::{dealias_in_place, inverse_unchecked};
pub use grid::{make_grid, signed_index, Axis, GridSpec, MIN_POINTS};
