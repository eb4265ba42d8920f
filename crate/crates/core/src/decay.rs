//! Power-law fits of recorded norms and the run audits.

use std::fmt;

use crate::error::{Error, Result};
use crate::norms::{NormSample, MONITORED_P};
use crate::operators::check_alpha;

/// Minimum number of samples a fit window must contain.
pub const MIN_FIT_SAMPLES: usize = 8;

/// Where a decay rate is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    L2,
    /// Homogeneous Sobolev seminorm of integer order `γ ≥ 1`.
    Hgamma(u32),
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::L2 => write!(f, "l2"),
            Space::Hgamma(g) => write!(f, "hg{g}"),
        }
    }
}

/// Predicted exponent of `(1+t)` for solutions with dissipation orders `alphas`.
///
/// L²: `−½Σ1/αᵢ`. Ḣ^γ: additionally `−½((2γ+λ)/α − 1)` with `α = max αᵢ`,
/// `λ = min αᵢ`.
pub fn theoretical_exponent(alphas: &[f64], space: Space) -> Result<f64> {
    if alphas.is_empty() {
        return Err(Error::Empty("dissipation orders"));
    }
    for &a in alphas {
        check_alpha("alpha", a)?;
    }
    let base = -0.5 * alphas.iter().map(|a| 1.0 / a).sum::<f64>();
    match space {
        Space::L2 => Ok(base),
        Space::Hgamma(0) => Err(Error::InvalidParameter {
            name: "gamma",
            value: 0.0,
            reason: "Sobolev order must be a positive integer",
        }),
        Space::Hgamma(g) => {
            let hi = alphas.iter().copied().fold(f64::MIN, f64::max);
            let lo = alphas.iter().copied().fold(f64::MAX, f64::min);
            Ok(base - 0.5 * ((2.0 * g as f64 + lo) / hi - 1.0))
        }
    }
}

/// Least-squares fit of `log v` against `log(1+t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub quantity: String,
    pub window: (f64, f64),
    pub samples: usize,
    pub exponent: f64,
    pub r_squared: f64,
    pub theoretical: Option<f64>,
}

impl DecayFit {
    pub fn named(mut self, quantity: impl Into<String>) -> Self {
        self.quantity = quantity.into();
        self
    }

    pub fn against(mut self, theoretical: f64) -> Self {
        self.theoretical = Some(theoretical);
        self
    }

    pub fn deviation(&self) -> Option<f64> {
        self.theoretical.map(|p| (self.exponent - p).abs())
    }
}

impl fmt::Display for DecayFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = if self.quantity.is_empty() {
            "value"
        } else {
            &self.quantity
        };
        write!(
            f,
            "{q}: exponent {:.6} over t in [{}, {}] ({} samples, r^2 = {:.6})",
            self.exponent, self.window.0, self.window.1, self.samples, self.r_squared
        )?;
        if let (Some(p), Some(d)) = (self.theoretical, self.deviation()) {
            write!(f, ", predicted {p:.6}, deviation {d:.6}")?;
        }
        Ok(())
    }
}

pub fn fit_power_law(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::InvalidParameter {
            name: "window",
            value: hi,
            reason: "upper end must exceed lower end",
        });
    }
    let mut pts = Vec::new();
    for &(t, v) in series.iter().filter(|(t, _)| (lo..=hi).contains(t)) {
        if !(v > 0.0) {
            return Err(Error::NonpositiveValue { t, value: v });
        }
        pts.push(((1.0 + t).ln(), v.ln()));
    }
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            found: pts.len(),
            required: MIN_FIT_SAMPLES,
        });
    }

    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &pts {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let sse: f64 = pts
            .iter()
            .map(|&(x, y)| {
                let r = y - my - slope * (x - mx);
                r * r
            })
            .sum();
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    Ok(DecayFit {
        quantity: String::new(),
        window,
        samples: pts.len(),
        exponent: slope,
        r_squared,
        theoretical: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxPrincipleReport {
    pub passed: bool,
    /// Largest relative increase `v(t_{k+1})/v(t_k) − 1` seen, or 0.
    pub worst_violation: f64,
    /// `(t_{k+1}, p)` of the worst increase.
    pub at: Option<(f64, f64)>,
}

/// Checks that every monitored L^p norm is non-increasing up to `tol`.
pub fn max_principle_audit(series: &[NormSample], tol: f64) -> MaxPrincipleReport {
    let mut report = MaxPrincipleReport {
        passed: true,
        worst_violation: 0.0,
        at: None,
    };
    for w in series.windows(2) {
        for p in MONITORED_P {
            let (a, b) = (w[0].lp(p).unwrap_or(0.0), w[1].lp(p).unwrap_or(0.0));
            if b > a * (1.0 + tol) {
                report.passed = false;
            }
            let rise = if b <= a {
                0.0
            } else if a > 0.0 {
                b / a - 1.0
            } else {
                f64::INFINITY
            };
            if rise > report.worst_violation {
                report.worst_violation = rise;
                report.at = Some((w[1].t, p));
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub max_residual: f64,
    /// End time of the interval with the largest residual.
    pub at: f64,
}

/// Relative residual of `½Δ‖u‖² + ∫(‖Λ_x^{α₁/2}u‖² + ‖Λ_y^{α₂/2}u‖²) = 0`
/// per sampling interval, with the integral by the trapezoid rule.
pub fn energy_audit(series: &[NormSample]) -> Result<EnergyReport> {
    if series.len() < 2 {
        return Err(Error::InsufficientSamples {
            found: series.len(),
            required: 2,
        });
    }
    let mut report = EnergyReport {
        max_residual: 0.0,
        at: series[1].t,
    };
    for w in series.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let trap = 0.5 * (b.t - a.t) * (a.dissipation() + b.dissipation());
        let change = 0.5 * (b.l2 * b.l2 - a.l2 * a.l2);
        let num = (change + trap).abs();
        let r = if num == 0.0 {
            0.0
        } else {
            num / trap.max(f64::MIN_POSITIVE)
        };
        if r > report.max_residual {
            report.max_residual = r;
            report.at = b.t;
        }
    }
    Ok(report)
}
