//! Monitored norms and seminorms, and the per-sample record.

use crate::error::{Error, Result};
use crate::operators::check_alpha;
use crate::spectral::{inverse_unchecked, Axis, PhysicalField, SpectralField};
use crate::split::CutoffSpec;
use crate::timestepper::SimState;

/// L^p exponents tracked along a run.
pub const MONITORED_P: [f64; 4] = [1.0, 2.0, 4.0, f64::INFINITY];

/// All monitored quantities at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSample {
    pub t: f64,
    pub l1: f64,
    pub l2: f64,
    pub l4: f64,
    pub linf: f64,
    /// `(γ, ‖u‖_{Ḣ^γ})` in configured order.
    pub hgamma: Vec<(f64, f64)>,
    /// `‖Λ_x^{α₁/2} u‖_{L²}`
    pub diss_x: f64,
    /// `‖Λ_y^{α₂/2} u‖_{L²}`
    pub diss_y: f64,
    pub ul_l2: f64,
    pub uh_l2: f64,
    pub ul_hgamma: Vec<(f64, f64)>,
    pub uh_hgamma: Vec<(f64, f64)>,
}

impl NormSample {
    pub fn lp(&self, p: f64) -> Option<f64> {
        match p {
            1.0 => Some(self.l1),
            2.0 => Some(self.l2),
            4.0 => Some(self.l4),
            f64::INFINITY => Some(self.linf),
            _ => None,
        }
    }

    pub fn hg(&self, gamma: f64) -> Option<f64> {
        self.hgamma.iter().find(|(g, _)| *g == gamma).map(|(_, v)| *v)
    }

    /// `‖Λ_x^{α₁/2}u‖² + ‖Λ_y^{α₂/2}u‖²`, the instantaneous energy dissipation.
    pub fn dissipation(&self) -> f64 {
        self.diss_x * self.diss_x + self.diss_y * self.diss_y
    }
}

pub fn lp_norm(u: &PhysicalField, p: f64) -> Result<f64> {
    let w = u.grid().cell_area();
    let v = u.values();
    Ok(match p {
        1.0 => w * v.iter().map(|x| x.abs()).sum::<f64>(),
        2.0 => (w * v.iter().map(|x| x * x).sum::<f64>()).sqrt(),
        4.0 => (w * v.iter().map(|x| (x * x) * (x * x)).sum::<f64>()).powf(0.25),
        f64::INFINITY => u.max_abs(),
        p => return Err(Error::UnsupportedNorm(p)),
    })
}

fn check_order(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "seminorm order must be finite and non-negative",
        })
    }
}

/// `|ξ|^{2γ}` with exact integer powers where possible.
pub(crate) fn radial_weight(k2: f64, gamma: f64) -> f64 {
    if gamma == 0.0 {
        1.0
    } else if gamma.fract() == 0.0 && gamma <= 32.0 {
        k2.powi(gamma as i32)
    } else {
        k2.powf(gamma)
    }
}

/// `‖Λ^γ u‖_{L²}` via Parseval.
pub fn hgamma_seminorm(v: &SpectralField, gamma: f64) -> Result<f64> {
    check_order("gamma", gamma)?;
    Ok(v
        .weighted_energy(|a, b| radial_weight(a * a + b * b, gamma))
        .sqrt())
}

/// `‖Λ_axis^β u‖_{L²}` via Parseval.
pub fn directional_seminorm(v: &SpectralField, axis: Axis, beta: f64) -> Result<f64> {
    check_order("beta", beta)?;
    let e = match axis {
        Axis::X => v.weighted_energy(|a, _| a.abs().powf(2.0 * beta)),
        Axis::Y => v.weighted_energy(|_, b| b.abs().powf(2.0 * beta)),
    };
    Ok(e.sqrt())
}

/// Assembles one [`NormSample`] for `s` in a single pass over the lattice.
pub fn record(s: &SimState, c: &CutoffSpec, gammas: &[f64]) -> Result<NormSample> {
    for &g in gammas {
        check_order("gamma", g)?;
    }
    check_alpha("alpha1", s.dissipation.alpha1())?;

    let u = inverse_unchecked(&s.u_hat);
    let grid = s.grid();
    let (xi1, xi2) = (grid.xi1(), grid.xi2());
    let px = s.dissipation.directional_symbol(Axis::X);
    let py = s.dissipation.directional_symbol(Axis::Y);
    let symbol = s.dissipation.symbol();

    let ng = gammas.len();
    let mut hg = vec![0.0; ng];
    let mut hg_low = vec![0.0; ng];
    let mut hg_high = vec![0.0; ng];
    let (mut dx, mut dy, mut low, mut high) = (0.0, 0.0, 0.0, 0.0);

    for ((j, k), z) in s.u_hat.coeffs().indexed_iter() {
        let e = z.norm_sqr();
        if e == 0.0 {
            continue;
        }
        dx += px[j] * e;
        dy += py[k] * e;
        let chi = c.symbol(s.t, symbol[(j, k)]);
        let (el, eh) = (chi * chi * e, (1.0 - chi) * (1.0 - chi) * e);
        low += el;
        high += eh;
        let k2 = xi1[j] * xi1[j] + xi2[k] * xi2[k];
        for (i, &g) in gammas.iter().enumerate() {
            let w = radial_weight(k2, g);
            hg[i] += w * e;
            hg_low[i] += w * el;
            hg_high[i] += w * eh;
        }
    }

    let area = grid.area();
    let norm = |x: f64| (x / area).sqrt();
    let tag = |v: &[f64]| -> Vec<(f64, f64)> {
        gammas.iter().zip(v).map(|(&g, &x)| (g, norm(x))).collect()
    };

    let sample = NormSample {
        t: s.t,
        l1: lp_norm(&u, 1.0)?,
        l2: lp_norm(&u, 2.0)?,
        l4: lp_norm(&u, 4.0)?,
        linf: lp_norm(&u, f64::INFINITY)?,
        hgamma: tag(&hg),
        diss_x: norm(dx),
        diss_y: norm(dy),
        ul_l2: norm(low),
        uh_l2: norm(high),
        ul_hgamma: tag(&hg_low),
        uh_hgamma: tag(&hg_high),
    };
    if !sample.l1.is_finite() || !sample.l2.is_finite() {
        return Err(Error::NonfiniteState { t: s.t });
    }
    Ok(sample)
}
