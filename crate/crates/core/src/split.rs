//! Time-frequency decomposition `u = u_L + u_H`.
//!
//! `u_L` keeps the lattice modes where `χ₀(μ⁻¹(1+t)·m(ξ))` is active; the
//! support shrinks toward `ξ = 0` as `t` grows.

use ndarray::Zip;

use crate::error::{Error, Result};
use crate::operators::DissipationSpec;
use crate::spectral::SpectralField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    mu: f64,
}

impl CutoffSpec {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: mu,
                reason: "cutoff scale must be positive",
            });
        }
        Ok(Self { mu })
    }

    /// `μ = 4·(1/α₁ + 1/α₂ + 1)`.
    pub fn default_for(alpha1: f64, alpha2: f64) -> Self {
        Self {
            mu: default_mu(alpha1, alpha2),
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Cutoff symbol at time `t` for a mode with dissipation symbol `m`.
    pub fn symbol(&self, t: f64, m: f64) -> f64 {
        chi0((1.0 + t) * m / self.mu)
    }
}

pub fn default_mu(alpha1: f64, alpha2: f64) -> f64 {
    4.0 * (1.0 / alpha1 + 1.0 / alpha2 + 1.0)
}

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth plateau: 1 on `[0, 1]`, 0 on `[2, ∞)`, and the C^∞ bridge
/// `φ(2−s)/(φ(2−s)+φ(s−1))`, `φ(t) = e^{−1/t}`, in between.
pub fn chi0(s: f64) -> f64 {
    if s <= 1.0 {
        1.0
    } else if s >= 2.0 {
        0.0
    } else {
        let (a, b) = (bump(2.0 - s), bump(s - 1.0));
        a / (a + b)
    }
}

/// Returns `(û_L, û_H)` with `û_H = û − û_L`.
pub fn split(
    u_hat: &SpectralField,
    t: f64,
    c: &CutoffSpec,
    d: &DissipationSpec,
) -> Result<(SpectralField, SpectralField)> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "time must be finite and non-negative",
        });
    }
    if u_hat.grid() != d.grid() {
        return Err(Error::GridMismatch);
    }
    let mut low = u_hat.clone();
    Zip::from(low.coeffs_mut())
        .and(d.symbol())
        .for_each(|z, &m| *z *= c.symbol(t, m));
    let high = u_hat.sub(&low)?;
    Ok((low, high))
}
