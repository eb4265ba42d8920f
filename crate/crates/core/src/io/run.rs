//! Run orchestration: initial data, stepping, sampling, corpus reports.

use std::fs::File;
use std::path::Path;

use log::{debug, info};

use super::checkpoint::{checkpoint_read, Checkpoint};
use super::config::{InitialCondition, RunConfig};
use crate::error::{Error, Result};
use crate::ineq::{evaluate_corpus, generate_corpus, FieldCorpusSpec, RatioReport, SpectrumLaw};
use crate::norms::{record, NormSample};
use crate::spectral::{GridSpec, PhysicalField};
use crate::split::CutoffSpec;
use crate::timestepper::{cfl_dt, step_ifrk4, SimState};

/// Synthesizes the configured initial datum on `grid`.
pub fn initial_field(cfg: &RunConfig, grid: &GridSpec) -> Result<PhysicalField> {
    match cfg.ic {
        InitialCondition::Gaussian {
            amplitude,
            radius,
            center,
        } => {
            let (cx, cy) = center.unwrap_or((0.5 * grid.lx(), 0.5 * grid.ly()));
            let r2 = radius * radius;
            PhysicalField::from_fn(grid.clone(), |x, y| {
                amplitude * (-((x - cx).powi(2) + (y - cy).powi(2)) / r2).exp()
            })
        }
        InitialCondition::SingleMode { k1, k2, amplitude } => {
            let (xi1, xi2) = (
                2.0 * std::f64::consts::PI * k1 as f64 / grid.lx(),
                2.0 * std::f64::consts::PI * k2 as f64 / grid.ly(),
            );
            PhysicalField::from_fn(grid.clone(), |x, y| amplitude * (xi1 * x + xi2 * y).cos())
        }
        InitialCondition::RandomBlob {
            seed,
            amplitude,
            band,
        } => {
            let noise = generate_corpus(&FieldCorpusSpec {
                count: 1,
                seed,
                law: SpectrumLaw::Flat,
                band_limit: band,
                grid: grid.clone(),
            })?
            .remove(0);
            let (cx, cy, r2) = (0.5 * grid.lx(), 0.5 * grid.ly(), cfg.ic_radius.powi(2));
            let mut v = noise.into_values();
            for ((i, j), x) in v.indexed_iter_mut() {
                *x *= (-((grid.x(i) - cx).powi(2) + (grid.y(j) - cy).powi(2)) / r2).exp();
            }
            let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if peak > 0.0 {
                v.mapv_inplace(|x| x * amplitude / peak);
            }
            PhysicalField::new(grid.clone(), v)
        }
    }
}

/// A configured run that can be advanced and sampled.
pub struct Simulation {
    state: SimState,
    cutoff: CutoffSpec,
    gammas: Vec<f64>,
    cfl_safety: f64,
    sample_every: f64,
    t_end: f64,
    steps: u64,
}

impl Simulation {
    /// Fresh run at `t = 0`, or a resumed one when `resume_from` is set.
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let state = match &cfg.resume_from {
            Some(path) => Self::resumed_state(cfg, checkpoint_read(path)?)?,
            None => {
                let grid = cfg.grid()?;
                let u0 = initial_field(cfg, &grid)?;
                SimState::from_physical(0.0, &u0, cfg.dissipation(&grid)?, cfg.flux()?)?
            }
        };
        Ok(Self {
            state,
            cutoff: cfg.cutoff()?,
            gammas: cfg.gammas_f64(),
            cfl_safety: cfg.cfl_safety,
            sample_every: cfg.sample_every,
            t_end: cfg.t_end,
            steps: 0,
        })
    }

    fn resumed_state(cfg: &RunConfig, c: Checkpoint) -> Result<SimState> {
        let g = c.field.grid();
        let same = g.nx() == cfg.nx
            && g.ny() == cfg.ny
            && g.lx() == cfg.lx
            && g.ly() == cfg.ly
            && c.alpha1 == cfg.alpha1
            && c.alpha2 == cfg.alpha2
            && c.flux == cfg.flux()?;
        if !same {
            return Err(Error::ConfigDomain {
                key: "resume_from".into(),
                message: "checkpoint grid, orders or flux differ from the configuration".into(),
            });
        }
        c.into_state()
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn sample(&self) -> Result<NormSample> {
        record(&self.state, &self.cutoff, &self.gammas)
    }

    /// Steps until `t == target` exactly. Without flux a single exact step
    /// suffices; otherwise the CFL step is shrunk to divide the remaining
    /// interval evenly.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        while self.state.t < target {
            let remaining = target - self.state.t;
            let dt = match self.state.flux {
                None => remaining,
                Some(_) => {
                    let cfl = cfl_dt(&self.state.physical(), self.state.grid(), self.cfl_safety);
                    remaining / (remaining / cfl).ceil().max(1.0)
                }
            };
            let last = dt >= remaining;
            let mut next = step_ifrk4(&self.state, if last { remaining } else { dt })?;
            if last || next.t >= target {
                next.t = target;
            }
            self.state = next;
            self.steps += 1;
        }
        Ok(())
    }

    /// Samples at the current time, then at every multiple of
    /// `sample_every` up to `t_end`, and at `t_end` itself.
    pub fn run(&mut self, mut on_sample: impl FnMut(&NormSample, &SimState) -> Result<()>) -> Result<()> {
        let first = self.sample()?;
        on_sample(&first, &self.state)?;
        let mut k = (self.state.t / self.sample_every * (1.0 + 1e-12)).floor() as u64 + 1;
        while self.state.t < self.t_end {
            let target = (k as f64 * self.sample_every).min(self.t_end);
            k += 1;
            if target <= self.state.t {
                continue;
            }
            self.advance_to(target)?;
            let s = self.sample()?;
            debug!("t = {:.4}, {} steps, l2 = {:.6e}", s.t, self.steps, s.l2);
            on_sample(&s, &self.state)?;
        }
        info!("reached t = {} after {} steps", self.state.t, self.steps);
        Ok(())
    }
}

/// Runs `cfg` to completion and returns the series and the final state.
pub fn run_simulation(cfg: &RunConfig) -> Result<(Vec<NormSample>, SimState)> {
    let mut sim = Simulation::new(cfg)?;
    let mut series = Vec::new();
    sim.run(|s, _| {
        series.push(s.clone());
        Ok(())
    })?;
    Ok((series, sim.state.clone()))
}

/// Generates the configured corpus and evaluates every ratio for every
/// monitored order.
pub fn run_ineq_lab(cfg: &RunConfig) -> Result<Vec<RatioReport>> {
    cfg.validate()?;
    let spec = cfg.corpus_spec()?;
    let d = cfg.dissipation(&spec.grid)?;
    let corpus = generate_corpus(&spec)?;
    let mut out = Vec::new();
    for &g in &cfg.gammas {
        out.extend(evaluate_corpus(&corpus, g, &d)?);
    }
    Ok(out)
}

pub fn write_ratio_reports(reports: &[RatioReport], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record([
        "inequality",
        "gamma",
        "exponent_a",
        "exponent_b",
        "samples",
        "degenerate",
        "min",
        "mean",
        "max",
    ])?;
    for r in reports {
        let (a, b) = r.exponents.unwrap_or((f64::NAN, f64::NAN));
        w.write_record(&[
            r.kind.to_string(),
            r.gamma.to_string(),
            format!("{a:.16e}"),
            format!("{b:.16e}"),
            r.ratios.len().to_string(),
            r.degenerate.to_string(),
            format!("{:.16e}", r.min),
            format!("{:.16e}", r.mean),
            format!("{:.16e}", r.max),
        ])?;
    }
    w.flush()?;
    Ok(())
}
