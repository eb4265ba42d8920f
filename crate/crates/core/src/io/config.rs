//! Flat `key = value` run configuration.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::ineq::{valid_band, FieldCorpusSpec, SpectrumLaw, MAX_BAND_LIMIT};
use crate::operators::{DissipationSpec, FluxSpec};
use crate::spectral::{GridSpec, MIN_POINTS};
use crate::split::{default_mu, CutoffSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// `A·exp(−|x−c|²/r²)`; `center = None` puts it in the middle of the box.
    Gaussian {
        amplitude: f64,
        radius: f64,
        center: Option<(f64, f64)>,
    },
    /// Random-phase flat spectrum up to `band` (fraction of Nyquist), windowed
    /// by a Gaussian of the configured radius and scaled to peak `amplitude`.
    RandomBlob { seed: u64, amplitude: f64, band: f64 },
    /// `A·cos(ξ₁x + ξ₂y)` on lattice mode `(k1, k2)`.
    SingleMode { k1: i64, k2: i64, amplitude: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub kappa: u32,
    pub t_end: f64,
    pub cfl_safety: f64,
    pub sample_every: f64,
    /// `None` selects `4(1/α₁ + 1/α₂ + 1)`.
    pub mu: Option<f64>,
    pub gammas: Vec<u32>,
    pub ic: InitialCondition,
    /// Window radius of the random blob.
    pub ic_radius: f64,
    pub nonlinearity_enabled: bool,
    pub timeseries: PathBuf,
    pub checkpoint: PathBuf,
    pub resume_from: Option<PathBuf>,
    pub corpus_count: usize,
    pub corpus_seed: u64,
    pub corpus_law: SpectrumLaw,
    pub corpus_band: f64,
    pub report: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            nx: 512,
            ny: 512,
            lx: 100.0 * PI,
            ly: 100.0 * PI,
            alpha1: 2.0,
            alpha2: 2.0,
            kappa: 1,
            t_end: 100.0,
            cfl_safety: 0.5,
            sample_every: 0.5,
            mu: None,
            gammas: vec![1, 2],
            ic: InitialCondition::Gaussian {
                amplitude: 5.0,
                radius: 5.0,
                center: None,
            },
            ic_radius: 5.0,
            nonlinearity_enabled: true,
            timeseries: PathBuf::from("timeseries.csv"),
            checkpoint: PathBuf::from("checkpoint.bin"),
            resume_from: None,
            corpus_count: 200,
            corpus_seed: 1,
            corpus_law: SpectrumLaw::Mixed,
            corpus_band: MAX_BAND_LIMIT,
            report: PathBuf::from("ineq_report.csv"),
        }
    }
}

const KEYS: &[&str] = &[
    "nx",
    "ny",
    "lx",
    "ly",
    "alpha1",
    "alpha2",
    "kappa",
    "t_end",
    "cfl_safety",
    "sample_every",
    "mu",
    "gammas",
    "ic",
    "ic_amplitude",
    "ic_radius",
    "ic_center",
    "ic_seed",
    "ic_band",
    "ic_mode",
    "nonlinearity_enabled",
    "timeseries",
    "checkpoint",
    "resume_from",
    "corpus_count",
    "corpus_seed",
    "corpus_law",
    "corpus_band",
    "report",
];

fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    let v = if let Some(head) = s.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        if head.is_empty() {
            PI
        } else {
            head.parse::<f64>().ok()? * PI
        }
    } else {
        s.parse::<f64>().ok()?
    };
    v.is_finite().then_some(v)
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    s.split(',').map(|p| item(p.trim())).collect()
}

fn parse_law(s: &str) -> Option<SpectrumLaw> {
    let mut parts = s.split(':').map(str::trim);
    let law = match parts.next()? {
        "flat" => SpectrumLaw::Flat,
        "mixed" => SpectrumLaw::Mixed,
        "powerlaw" => SpectrumLaw::PowerLaw {
            decay: parse_real(parts.next()?)?,
        },
        "ring" => SpectrumLaw::Ring {
            k0: parse_real(parts.next()?)?,
            width: parse_real(parts.next()?)?,
        },
        _ => return None,
    };
    parts.next().is_none().then_some(law)
}

fn domain(key: &str, message: impl Into<String>) -> Error {
    Error::ConfigDomain {
        key: key.to_string(),
        message: message.into(),
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    parse_config(&fs::read_to_string(path)?)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut c = RunConfig::default();
    let mut seen = HashSet::new();
    let (mut ic_kind, mut amplitude, mut center, mut seed, mut band, mut mode) =
        ("gaussian".to_string(), 5.0, None, 0u64, 0.25, (1i64, 0i64));

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::ConfigParse { line, message };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(format!("unknown key `{key}`")));
        }
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        let bad = || err(format!("cannot parse value `{value}` for `{key}`"));
        let real = || parse_real(value).ok_or_else(bad);
        let uint = || value.parse::<u64>().map_err(|_| bad());
        match key {
            "nx" => c.nx = uint()? as usize,
            "ny" => c.ny = uint()? as usize,
            "lx" => c.lx = real()?,
            "ly" => c.ly = real()?,
            "alpha1" => c.alpha1 = real()?,
            "alpha2" => c.alpha2 = real()?,
            "kappa" => c.kappa = value.parse().map_err(|_| bad())?,
            "t_end" => c.t_end = real()?,
            "cfl_safety" => c.cfl_safety = real()?,
            "sample_every" => c.sample_every = real()?,
            "mu" => c.mu = Some(real()?),
            "gammas" => c.gammas = parse_list(value, |s| s.parse().ok()).ok_or_else(bad)?,
            "ic" => ic_kind = value.to_string(),
            "ic_amplitude" => amplitude = real()?,
            "ic_radius" => c.ic_radius = real()?,
            "ic_center" => match parse_list(value, parse_real).as_deref() {
                Some(&[x, y]) => center = Some((x, y)),
                _ => return Err(bad()),
            },
            "ic_seed" => seed = uint()?,
            "ic_band" => band = real()?,
            "ic_mode" => match parse_list(value, |s| s.parse::<i64>().ok()).as_deref() {
                Some(&[a, b]) => mode = (a, b),
                _ => return Err(bad()),
            },
            "nonlinearity_enabled" => {
                c.nonlinearity_enabled = value.parse().map_err(|_| bad())?;
            }
            "timeseries" => c.timeseries = PathBuf::from(value),
            "checkpoint" => c.checkpoint = PathBuf::from(value),
            "resume_from" => c.resume_from = Some(PathBuf::from(value)),
            "corpus_count" => c.corpus_count = uint()? as usize,
            "corpus_seed" => c.corpus_seed = uint()?,
            "corpus_law" => c.corpus_law = parse_law(value).ok_or_else(bad)?,
            "corpus_band" => c.corpus_band = real()?,
            "report" => c.report = PathBuf::from(value),
            _ => unreachable!("key list and match arms disagree"),
        }
    }

    c.ic = match ic_kind.as_str() {
        "gaussian" => InitialCondition::Gaussian {
            amplitude,
            radius: c.ic_radius,
            center,
        },
        "random_blob" => InitialCondition::RandomBlob {
            seed,
            amplitude,
            band,
        },
        "single_mode" => InitialCondition::SingleMode {
            k1: mode.0,
            k2: mode.1,
            amplitude,
        },
        other => return Err(domain("ic", format!("unknown initial condition `{other}`"))),
    };
    c.validate()?;
    Ok(c)
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (key, n) in [("nx", self.nx), ("ny", self.ny)] {
            if n < MIN_POINTS || n % 2 != 0 {
                return Err(domain(key, format!("{n} points; need an even count >= {MIN_POINTS}")));
            }
        }
        let positive = [
            ("lx", self.lx),
            ("ly", self.ly),
            ("t_end", self.t_end),
            ("cfl_safety", self.cfl_safety),
            ("sample_every", self.sample_every),
            ("ic_radius", self.ic_radius),
            ("mu", self.mu.unwrap_or(1.0)),
        ];
        for (key, v) in positive {
            if !(v > 0.0) {
                return Err(domain(key, format!("{v} must be positive")));
            }
        }
        for (key, a) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(a > 1.0 && a <= 2.0) {
                return Err(domain(key, format!("{a} lies outside (1, 2]")));
            }
        }
        if self.kappa == 0 {
            return Err(domain("kappa", "flux exponent must be >= 1"));
        }
        if self.gammas.contains(&0) {
            return Err(domain("gammas", "Sobolev orders must be positive integers"));
        }
        match self.ic {
            InitialCondition::Gaussian { radius, .. } if !(radius > 0.0) => {
                return Err(domain("ic_radius", "must be positive"));
            }
            InitialCondition::RandomBlob { band, .. } if !valid_band(band) => {
                return Err(domain("ic_band", format!("{band} lies outside (0, 2/3]")));
            }
            InitialCondition::SingleMode { k1, k2, .. } => {
                let inside = |k: i64, n: usize| k.unsigned_abs() < (n / 2) as u64;
                if !(inside(k1, self.nx) && inside(k2, self.ny)) {
                    return Err(domain("ic_mode", "mode lies outside the lattice"));
                }
            }
            _ => {}
        }
        if self.corpus_count == 0 {
            return Err(domain("corpus_count", "must be at least 1"));
        }
        if !valid_band(self.corpus_band) {
            return Err(domain("corpus_band", format!("{} lies outside (0, 2/3]", self.corpus_band)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.nx, self.ny, self.lx, self.ly)
    }

    pub fn dissipation(&self, grid: &GridSpec) -> Result<DissipationSpec> {
        DissipationSpec::new(grid, self.alpha1, self.alpha2)
    }

    pub fn flux(&self) -> Result<Option<FluxSpec>> {
        if self.nonlinearity_enabled {
            FluxSpec::new(self.kappa).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn cutoff(&self) -> Result<CutoffSpec> {
        CutoffSpec::new(self.mu.unwrap_or_else(|| default_mu(self.alpha1, self.alpha2)))
    }

    pub fn gammas_f64(&self) -> Vec<f64> {
        self.gammas.iter().map(|&g| g as f64).collect()
    }

    pub fn corpus_spec(&self) -> Result<FieldCorpusSpec> {
        Ok(FieldCorpusSpec {
            count: self.corpus_count,
            seed: self.corpus_seed,
            law: self.corpus_law,
            band_limit: self.corpus_band,
            grid: self.grid()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_key_keeps_defaults() {
        let c = parse_config("alpha1 = 1.5\n").unwrap();
        assert_eq!(c.alpha1, 1.5);
        assert_eq!(
            c,
            RunConfig {
                alpha1: 1.5,
                ..RunConfig::default()
            }
        );
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
    }

    #[test]
    fn documented_defaults() {
        let c = RunConfig::default();
        assert_eq!((c.nx, c.ny), (512, 512));
        assert_eq!((c.lx, c.ly), (100.0 * PI, 100.0 * PI));
        assert_eq!((c.alpha1, c.alpha2, c.kappa), (2.0, 2.0, 1));
        assert_eq!((c.t_end, c.cfl_safety, c.sample_every), (100.0, 0.5, 0.5));
        assert_eq!(c.gammas, vec![1, 2]);
        assert_eq!(c.cutoff().unwrap().mu(), 8.0);
    }

    #[test]
    fn domain_violations_name_the_key() {
        for (text, key) in [
            ("alpha1 = 2.5", "alpha1"),
            ("alpha2 = 1", "alpha2"),
            ("nx = 7", "nx"),
            ("ny = 6", "ny"),
            ("t_end = 0", "t_end"),
            ("sample_every = -1", "sample_every"),
            ("kappa = 0", "kappa"),
            ("gammas = 1, 0", "gammas"),
            ("ic = spiral", "ic"),
            ("ic = random_blob\nic_band = 0.9", "ic_band"),
            ("nx = 16\nic = single_mode\nic_mode = 8, 0", "ic_mode"),
        ] {
            match parse_config(text) {
                Err(Error::ConfigDomain { key: k, .. }) => assert_eq!(k, key, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        for (text, line) in [
            ("nx = 64\n\nbogus = 1", 3),
            ("# header\nalpha1 1.5", 2),
            ("lx = ten", 1),
            ("nx = 64\nnx = 32", 2),
            ("gammas = 1, two", 1),
            ("ic_center = 1", 1),
            ("nonlinearity_enabled = maybe", 1),
        ] {
            match parse_config(text) {
                Err(Error::ConfigParse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn full_file() {
        let text = "
            # anisotropic run
            nx = 64          # grid
            ny = 32
            lx = 20pi
            ly = 2 * pi
            alpha1 = 1.5
            kappa = 2
            mu = 3.5
            gammas = 1,2,3
            ic = single_mode
            ic_mode = 2, -1
            ic_amplitude = 0.5
            nonlinearity_enabled = false
            timeseries = out/series.csv
            corpus_law = ring:3:0.5
        ";
        let c = parse_config(text).unwrap();
        assert_eq!((c.nx, c.ny), (64, 32));
        assert!((c.lx - 20.0 * PI).abs() < 1e-12 && (c.ly - 2.0 * PI).abs() < 1e-15);
        assert_eq!(c.kappa, 2);
        assert_eq!(c.mu, Some(3.5));
        assert_eq!(c.gammas, vec![1, 2, 3]);
        assert_eq!(
            c.ic,
            InitialCondition::SingleMode {
                k1: 2,
                k2: -1,
                amplitude: 0.5
            }
        );
        assert!(!c.nonlinearity_enabled);
        assert!(c.flux().unwrap().is_none());
        assert_eq!(c.timeseries, PathBuf::from("out/series.csv"));
        assert_eq!(c.corpus_law, SpectrumLaw::Ring { k0: 3.0, width: 0.5 });
    }

    #[test]
    fn reals_accept_pi_multiples() {
        assert_eq!(parse_real("pi"), Some(PI));
        assert_eq!(parse_real("100pi"), Some(100.0 * PI));
        assert_eq!(parse_real("0.5 * pi"), Some(0.5 * PI));
        assert_eq!(parse_real("1e3"), Some(1e3));
        assert_eq!(parse_real("inf"), None);
        assert_eq!(parse_real("xpi"), None);
    }
}
