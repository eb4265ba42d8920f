//! Fourier multipliers and the dealiased flux divergence.

use std::sync::Arc;

use ndarray::Array2;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    dealias_in_place, forward_transform, inverse_unchecked, retained_band, signed_index, Axis,
    GridSpec, PhysicalField, SpectralField,
};

/// Dissipation orders `(α₁, α₂)` and the symbol `m(ξ) = |ξ₁|^{α₁} + |ξ₂|^{α₂}`
/// tabulated on one grid's lattice.
#[derive(Debug, Clone)]
pub struct DissipationSpec {
    alpha1: f64,
    alpha2: f64,
    grid: GridSpec,
    // |ξ₁|^{α₁} per x-index and |ξ₂|^{α₂} per y-index.
    px: Arc<[f64]>,
    py: Arc<[f64]>,
    symbol: Arc<Array2<f64>>,
}

pub(crate) fn check_alpha(name: &'static str, alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: alpha,
            reason: "dissipation order must lie in (1, 2]",
        })
    }
}

impl DissipationSpec {
    pub fn new(grid: &GridSpec, alpha1: f64, alpha2: f64) -> Result<Self> {
        check_alpha("alpha1", alpha1)?;
        check_alpha("alpha2", alpha2)?;
        let px: Arc<[f64]> = grid.xi1().iter().map(|k| k.abs().powf(alpha1)).collect();
        let py: Arc<[f64]> = grid.xi2().iter().map(|k| k.abs().powf(alpha2)).collect();
        let symbol = Array2::from_shape_fn(grid.shape(), |(j, k)| px[j] + py[k]);
        Ok(Self {
            alpha1,
            alpha2,
            grid: grid.clone(),
            px,
            py,
            symbol: Arc::new(symbol),
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn alpha(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.alpha1,
            Axis::Y => self.alpha2,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// `m(ξ)` on the lattice, indexed like the spectral coefficients.
    pub fn symbol(&self) -> &Array2<f64> {
        &self.symbol
    }

    /// `|ξ_axis|^{α_axis}` along the given axis.
    pub fn directional_symbol(&self, axis: Axis) -> &[f64] {
        match axis {
            Axis::X => &self.px,
            Axis::Y => &self.py,
        }
    }

    pub fn max_symbol(&self) -> f64 {
        self.symbol.iter().fold(0.0f64, |m, &s| m.max(s))
    }
}

/// Monomial flux `f(u) = u^{1+κ}/(1+κ)`, applied in both directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FluxSpec {
    kappa: u32,
}

impl FluxSpec {
    pub fn new(kappa: u32) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: 0.0,
                reason: "flux power must be at least 1",
            });
        }
        Ok(Self { kappa })
    }

    /// The quadratic flux `u²/2` of the Burgers-type model.
    pub fn burgers() -> Self {
        Self { kappa: 1 }
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn eval(&self, u: f64) -> f64 {
        let p = self.kappa as i32 + 1;
        u.powi(p) / p as f64
    }
}

fn check_order(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "multiplier order must be finite and non-negative",
        })
    }
}

/// `Λ_axis^β`: multiplies by `|ξ_axis|^β`.
pub fn apply_directional(v: &SpectralField, axis: Axis, beta: f64) -> Result<SpectralField> {
    check_order("beta", beta)?;
    if beta == 0.0 {
        return Ok(v.clone());
    }
    Ok(match axis {
        Axis::X => v.multiplied(|k1, _| k1.abs().powf(beta)),
        Axis::Y => v.multiplied(|_, k2| k2.abs().powf(beta)),
    })
}

/// `Λ^γ`: multiplies by `|ξ|^γ`.
pub fn apply_isotropic(v: &SpectralField, gamma: f64) -> Result<SpectralField> {
    check_order("gamma", gamma)?;
    if gamma == 0.0 {
        return Ok(v.clone());
    }
    Ok(v.multiplied(|k1, k2| (k1 * k1 + k2 * k2).powf(gamma / 2.0)))
}

/// Spectrum of `∂_x f(u) + ∂_y f(u)` with `f` evaluated on the dealiased state.
pub fn nonlinear_term(u: &PhysicalField, flux: FluxSpec) -> Result<SpectralField> {
    let mut u_hat = forward_transform(u);
    dealias_in_place(&mut u_hat, flux.kappa());
    flux_divergence(&u_hat, flux, f64::NAN)
}

/// Same as [`nonlinear_term`] for a state already truncated to the flux band.
/// `t` only labels a non-finite error.
pub(crate) fn flux_divergence(u_hat: &SpectralField, flux: FluxSpec, t: f64) -> Result<SpectralField> {
    let u = inverse_unchecked(u_hat);
    let fu = u.into_values().mapv(|v| flux.eval(v));
    if fu.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonfiniteState { t });
    }
    let grid = u_hat.grid().clone();
    let f_hat = forward_transform(&PhysicalField::new(grid.clone(), fu).map_err(|_| Error::NonfiniteState { t })?);
    Ok(derivative_sum_truncated(f_hat, flux.kappa()))
}

// Applies i(ξ₁+ξ₂) and the flux band truncation in one pass.
fn derivative_sum_truncated(mut f_hat: SpectralField, kappa: u32) -> SpectralField {
    let grid = f_hat.grid().clone();
    let (nx, ny) = grid.shape();
    let (bx, by) = (retained_band(nx, kappa) as i64, retained_band(ny, kappa) as i64);
    let (xi1, xi2) = (grid.xi1(), grid.xi2());
    for ((j, k), c) in f_hat.coeffs_mut().indexed_iter_mut() {
        if signed_index(j, nx).abs() > bx || signed_index(k, ny).abs() > by {
            *c = Complex64::default();
        } else {
            *c *= Complex64::new(0.0, xi1[j] + xi2[k]);
        }
    }
    f_hat
}
