//! Integrating-factor RK4 for `û_t = −m(ξ)û − N̂(u)`.
//!
//! The stiff linear part is integrated exactly through `e^{−m(ξ)h}`; classical
//! RK4 acts on `v̂ = e^{t·m(ξ)}û`. Written back in the `û` frame no growing
//! exponential is ever formed.

use ndarray::{Array2, Zip};
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{flux_divergence, DissipationSpec, FluxSpec};
use crate::spectral::{dealias_in_place, forward_transform, GridSpec, PhysicalField, SpectralField};

/// Floor on `‖u‖_∞` in the CFL rule, so a vanishing state yields a finite step.
pub const CFL_SPEED_FLOOR: f64 = 1e-8;

/// Solver state at time `t`. `flux == None` switches the nonlinearity off.
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub u_hat: SpectralField,
    pub dissipation: DissipationSpec,
    pub flux: Option<FluxSpec>,
}

impl SimState {
    /// Builds a state from a spectrum, truncating it to the flux band.
    pub fn new(
        t: f64,
        mut u_hat: SpectralField,
        dissipation: DissipationSpec,
        flux: Option<FluxSpec>,
    ) -> Result<Self> {
        if u_hat.grid() != dissipation.grid() {
            return Err(Error::GridMismatch);
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "t",
                value: t,
                reason: "time must be finite and non-negative",
            });
        }
        dealias_in_place(&mut u_hat, band_kappa(flux));
        Ok(Self {
            t,
            u_hat,
            dissipation,
            flux,
        })
    }

    pub fn from_physical(
        t: f64,
        u: &PhysicalField,
        dissipation: DissipationSpec,
        flux: Option<FluxSpec>,
    ) -> Result<Self> {
        Self::new(t, forward_transform(u), dissipation, flux)
    }

    pub fn grid(&self) -> &GridSpec {
        self.u_hat.grid()
    }

    pub fn physical(&self) -> PhysicalField {
        crate::spectral::inverse_unchecked(&self.u_hat)
    }
}

// The linear run keeps the quadratic band so that toggling the flux does not
// change the resolved state space.
fn band_kappa(flux: Option<FluxSpec>) -> u32 {
    flux.map_or(1, |f| f.kappa())
}

/// `exp(−t·m(ξ))·û₀`.
pub fn linear_exact(u0_hat: &SpectralField, d: &DissipationSpec, t: f64) -> Result<SpectralField> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "evolution time must be finite and non-negative",
        });
    }
    if u0_hat.grid() != d.grid() {
        return Err(Error::GridMismatch);
    }
    let mut out = u0_hat.clone();
    if t > 0.0 {
        Zip::from(out.coeffs_mut())
            .and(d.symbol())
            .for_each(|c, &m| *c *= (-t * m).exp());
    }
    Ok(out)
}

/// `safety·min(dx, dy) / max(‖u‖_∞, 1e−8)`. The linear part is exact and
/// imposes no restriction.
pub fn cfl_dt(u: &PhysicalField, g: &GridSpec, safety: f64) -> f64 {
    safety * g.dx().min(g.dy()) / u.max_abs().max(CFL_SPEED_FLOOR)
}

fn minus_flux(u_hat: &SpectralField, flux: FluxSpec, t: f64) -> Result<Array2<Complex64>> {
    let mut n = flux_divergence(u_hat, flux, t)?.coeffs().clone();
    n.mapv_inplace(|c| -c);
    Ok(n)
}

/// One IF-RK4 step of size `dt`.
pub fn step_ifrk4(s: &SimState, dt: f64) -> Result<SimState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "time step must be positive and finite",
        });
    }
    let t_next = s.t + dt;
    let half = s.dissipation.symbol().mapv(|m| (-0.5 * dt * m).exp());
    let full = half.mapv(|e| e * e);
    let u0 = s.u_hat.coeffs();
    let grid = s.grid().clone();

    let coeffs = match s.flux {
        None => {
            let mut out = u0.clone();
            Zip::from(&mut out).and(&full).for_each(|c, &e| *c *= e);
            out
        }
        Some(flux) => {
            let h = dt;
            let field = |c: Array2<Complex64>| SpectralField::new(grid.clone(), c);

            let k1 = minus_flux(&s.u_hat, flux, s.t)?;

            let mut a = u0.clone();
            Zip::from(&mut a)
                .and(&k1)
                .and(&half)
                .for_each(|a, &k, &e| *a = (*a + k * (0.5 * h)) * e);
            let k2 = minus_flux(&field(a)?, flux, s.t)?;

            let mut b = u0.clone();
            Zip::from(&mut b)
                .and(&k2)
                .and(&half)
                .for_each(|b, &k, &e| *b = *b * e + k * (0.5 * h));
            let k3 = minus_flux(&field(b)?, flux, s.t)?;

            let mut c = u0.clone();
            Zip::from(&mut c)
                .and(&k3)
                .and(&half)
                .and(&full)
                .for_each(|c, &k, &eh, &ef| *c = *c * ef + k * (h * eh));
            let k4 = minus_flux(&field(c)?, flux, s.t)?;

            // û_{n+1} = E(û + h/6·k1) + h/6·(2E½(k2 + k3) + k4)
            let mut out = u0.clone();
            Zip::from(&mut out)
                .and(&k1)
                .and(&full)
                .for_each(|o, &k1, &ef| *o = (*o + k1 * (h / 6.0)) * ef);
            Zip::from(&mut out)
                .and(&k2)
                .and(&k3)
                .and(&k4)
                .and(&half)
                .for_each(|o, &k2, &k3, &k4, &eh| {
                    *o += ((k2 + k3) * (2.0 * eh) + k4) * (h / 6.0);
                });
            out
        }
    };

    let mut u_hat = SpectralField::new(grid, coeffs)?;
    dealias_in_place(&mut u_hat, band_kappa(s.flux));
    if !u_hat.is_finite() {
        return Err(Error::NonfiniteState { t: t_next });
    }
    Ok(SimState {
        t: t_next,
        u_hat,
        dissipation: s.dissipation.clone(),
        flux: s.flux,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::{inverse_transform, make_grid};

    fn gaussian_state(grid: &GridSpec, a1: f64, a2: f64, flux: Option<FluxSpec>) -> SimState {
        let (cx, cy) = (grid.lx() / 2.0, grid.ly() / 2.0);
        let u = PhysicalField::from_fn(grid.clone(), |x, y| {
            2.0 * (-((x - cx).powi(2) + (y - cy).powi(2)) / 1.5).exp()
        })
        .unwrap();
        let d = DissipationSpec::new(grid, a1, a2).unwrap();
        SimState::from_physical(0.0, &u, d, flux).unwrap()
    }

    fn rel_max_err(a: &SpectralField, b: &SpectralField) -> f64 {
        let scale = b.max_abs();
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
            / scale
    }

    #[test]
    fn single_mode_heat_decay() {
        let g = make_grid(16, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let u = PhysicalField::from_fn(g.clone(), |x, _| x.cos()).unwrap();
        let d = DissipationSpec::new(&g, 2.0, 2.0).unwrap();
        let out = linear_exact(&forward_transform(&u), &d, 1.0).unwrap();
        let c = out.at(1, 0).unwrap();
        assert!((c.re - g.area() / 2.0 * (-1.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn anisotropic_single_mode_decay() {
        // Hand-evaluated multiplier: exp(−2·2^{1.5}).
        let g = make_grid(16, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let u = PhysicalField::from_fn(g.clone(), |_, y| (2.0 * y).cos()).unwrap();
        let d = DissipationSpec::new(&g, 2.0, 1.5).unwrap();
        let u0 = forward_transform(&u);
        let out = linear_exact(&u0, &d, 2.0).unwrap();
        let ratio = out.at(0, 2).unwrap().re / u0.at(0, 2).unwrap().re;
        assert!((ratio - (-2.0 * 2f64.powf(1.5)).exp()).abs() < 1e-15);
        assert_eq!(linear_exact(&u0, &d, 0.0).unwrap(), u0);
        assert!(linear_exact(&u0, &d, -1.0).is_err());
    }

    #[test]
    fn linear_step_is_exact_for_any_dt() {
        let g = make_grid(32, 32, 10.0, 10.0).unwrap();
        let s0 = gaussian_state(&g, 1.5, 2.0, None);
        for dt in [1e-3, 0.1, 2.0, 50.0] {
            let s1 = step_ifrk4(&s0, dt).unwrap();
            let exact = linear_exact(&s0.u_hat, &s0.dissipation, dt).unwrap();
            assert!(rel_max_err(&s1.u_hat, &exact) <= 1e-13, "dt={dt}");
            assert_eq!(s1.t, dt);
        }
    }

    #[test]
    fn linear_steps_compose_exactly() {
        let g = make_grid(32, 32, 10.0, 10.0).unwrap();
        let s0 = gaussian_state(&g, 1.2, 1.8, None);
        let exact = linear_exact(&s0.u_hat, &s0.dissipation, 3.0).unwrap();
        for n in [1usize, 7, 40] {
            let mut s = s0.clone();
            for _ in 0..n {
                s = step_ifrk4(&s, 3.0 / n as f64).unwrap();
            }
            let scale = exact.max_abs();
            let err = s
                .u_hat
                .coeffs()
                .iter()
                .zip(exact.coeffs())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            assert!(err <= 1e-12 * scale, "n={n}: {err}");
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = make_grid(16, 16, 5.0, 5.0).unwrap();
        let d = DissipationSpec::new(&g, 1.5, 1.5).unwrap();
        let s = SimState::new(0.0, SpectralField::zeros(g.clone()), d, Some(FluxSpec::burgers())).unwrap();
        let s1 = step_ifrk4(&s, 0.3).unwrap();
        assert!(s1.u_hat.coeffs().iter().all(|c| *c == Complex64::default()));
    }

    #[test]
    fn rejects_bad_dt() {
        let g = make_grid(16, 16, 5.0, 5.0).unwrap();
        let s = gaussian_state(&g, 2.0, 2.0, Some(FluxSpec::burgers()));
        assert!(step_ifrk4(&s, 0.0).is_err());
        assert!(step_ifrk4(&s, f64::NAN).is_err());
    }

    #[test]
    fn cfl_examples() {
        let g = make_grid(8, 8, 4.0, 4.0).unwrap();
        let u = PhysicalField::from_fn(g.clone(), |x, _| if x == 0.0 { 2.0 } else { -1.0 }).unwrap();
        assert_eq!(cfl_dt(&u, &g, 0.5), 0.125);
        let zero = PhysicalField::zeros(g.clone());
        assert_eq!(cfl_dt(&zero, &g, 0.5), 0.5 * 0.5 / 1e-8);
        let g2 = make_grid(10, 10, 1.0, 1.0).unwrap();
        let one = PhysicalField::from_fn(g2.clone(), |_, _| 1.0).unwrap();
        assert!((cfl_dt(&one, &g2, 1.0) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn nonlinear_run_dissipates_and_conserves_mean() {
        let g = make_grid(32, 32, 8.0, 8.0).unwrap();
        let mut s = gaussian_state(&g, 1.5, 2.0, Some(FluxSpec::burgers()));
        let mean0 = s.u_hat.coeffs()[(0, 0)];
        let mut e_prev = s.u_hat.energy();
        for _ in 0..50 {
            let dt = cfl_dt(&s.physical(), &g, 0.5);
            s = step_ifrk4(&s, dt).unwrap();
            let e = s.u_hat.energy();
            assert!(e <= e_prev * (1.0 + 1e-10));
            e_prev = e;
            assert!((s.u_hat.coeffs()[(0, 0)] - mean0).norm() <= 1e-12 * mean0.norm());
        }
        assert!(inverse_transform(&s.u_hat).is_ok());
    }

    #[test]
    fn richardson_order_is_four() {
        let g = make_grid(32, 32, 4.0 * PI, 4.0 * PI).unwrap();
        let s0 = gaussian_state(&g, 1.5, 1.8, Some(FluxSpec::burgers()));
        let run = |n: usize| {
            let mut s = s0.clone();
            for _ in 0..n {
                s = step_ifrk4(&s, 0.4 / n as f64).unwrap();
            }
            s.u_hat
        };
        let reference = run(512);
        let err = |n| run(n).sub(&reference).unwrap().energy().sqrt();
        let (e1, e2) = (err(16), err(32));
        let ratio = e1 / e2;
        assert!(ratio > 14.0 && ratio < 18.5, "error ratio {ratio}");
    }
}
