//! Interpolation-inequality ratios on synthetic band-limited corpora.
//!
//! Every inequality here has the form `LHS ≤ C·RHS` with an unknown
//! constant. The lab reports `LHS/RHS` with `C = 1`; the checkable content is
//! that the ratio is homogeneous of degree zero and that its corpus maximum
//! is stable.
//!
//! `∇^γ` is the isotropic multiplier `|ξ|^γ` throughout.

use std::f64::consts::PI;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::norms::{lp_norm, radial_weight};
use crate::operators::DissipationSpec;
use crate::spectral::{
    forward_transform, inverse_transform, Axis, GridSpec, PhysicalField, SpectralField,
};

/// Largest admissible band limit; decimal spellings of 2/3 are accepted.
pub const MAX_BAND_LIMIT: f64 = 2.0 / 3.0;

pub fn valid_band(b: f64) -> bool {
    b > 0.0 && b <= MAX_BAND_LIMIT * (1.0 + 1e-12)
}

/// Spectral envelope of corpus members, as a function of `|ξ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumLaw {
    Flat,
    /// `|ξ|^{−decay}`.
    PowerLaw { decay: f64 },
    /// Gaussian shell `exp(−(|ξ|−k0)²/(2w²))`; `width = 0` keeps the exact shell.
    Ring { k0: f64, width: f64 },
    /// Members cycle through the three laws above with sampled parameters and
    /// a sampled axis stretch.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct FieldCorpusSpec {
    pub count: usize,
    pub seed: u64,
    pub law: SpectrumLaw,
    /// Retained index band per axis, as a fraction of the Nyquist index.
    pub band_limit: f64,
    pub grid: GridSpec,
}

impl FieldCorpusSpec {
    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Empty("corpus"));
        }
        if !valid_band(self.band_limit) {
            return Err(Error::InvalidParameter {
                name: "band_limit",
                value: self.band_limit,
                reason: "band limit must lie in (0, 2/3]",
            });
        }
        match self.law {
            SpectrumLaw::PowerLaw { decay } if !decay.is_finite() => Err(Error::InvalidParameter {
                name: "decay",
                value: decay,
                reason: "power-law decay must be finite",
            }),
            SpectrumLaw::Ring { k0, width } if !(k0 > 0.0 && width >= 0.0 && width.is_finite()) => {
                Err(Error::InvalidParameter {
                    name: "ring",
                    value: k0,
                    reason: "ring needs k0 > 0 and a finite width >= 0",
                })
            }
            _ => Ok(()),
        }
    }

    /// Largest retained signed index per axis.
    pub fn band(&self) -> (i64, i64) {
        let k = |n: usize| (self.band_limit * (n / 2) as f64 + 1e-9).floor() as i64;
        (k(self.grid.nx()), k(self.grid.ny()))
    }
}

#[derive(Debug, Clone, Copy)]
struct Envelope {
    law: SpectrumLaw,
    stretch: f64,
}

impl Envelope {
    fn at(&self, xi1: f64, xi2: f64) -> f64 {
        let (a, b) = (xi1 * self.stretch, xi2 / self.stretch);
        let k = (a * a + b * b).sqrt();
        match self.law {
            SpectrumLaw::Flat | SpectrumLaw::Mixed => 1.0,
            SpectrumLaw::PowerLaw { decay } => k.powf(-decay),
            SpectrumLaw::Ring { k0, width: 0.0 } => {
                if (k - k0).abs() <= 1e-9 * k0 {
                    1.0
                } else {
                    0.0
                }
            }
            SpectrumLaw::Ring { k0, width: w } => (-0.5 * ((k - k0) / w).powi(2)).exp(),
        }
    }
}

/// Mixed-law parameters in `[0, 1)³` per member: the law family cycles
/// with the index and, within a family, each coordinate is Latin-hypercube
/// stratified so the extremes of the parameter range are always covered.
fn mixed_design(seed: u64, count: usize) -> Vec<(usize, [f64; 3])> {
    let per_family: Vec<Vec<[f64; 3]>> = (0..3)
        .map(|f| {
            let n = (count + 2 - f) / 3;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((1 << 63) | f as u64);
            let strata: Vec<Vec<usize>> = (0..3)
                .map(|_| {
                    let mut p: Vec<usize> = (0..n).collect();
                    p.shuffle(&mut rng);
                    p
                })
                .collect();
            (0..n)
                .map(|j| [0, 1, 2].map(|c| (strata[c][j] as f64 + rng.gen::<f64>()) / n as f64))
                .collect()
        })
        .collect();
    (0..count).map(|i| (i % 3, per_family[i % 3][i / 3])).collect()
}

fn mixed_envelope(family: usize, p: [f64; 3], k_max: f64) -> Envelope {
    let law = match family {
        0 => SpectrumLaw::Flat,
        1 => SpectrumLaw::PowerLaw {
            decay: 0.5 + 2.5 * p[0],
        },
        _ => SpectrumLaw::Ring {
            k0: (0.1 + 0.6 * p[0]) * k_max,
            width: (0.05 + 0.25 * p[1]) * k_max,
        },
    };
    Envelope {
        law,
        stretch: 2f64.powf(3.0 * (2.0 * p[2] - 1.0)),
    }
}

/// Deterministic corpus of zero-mean real fields with unit L² norm.
///
/// Member `i` depends only on `(seed, i, count)`, the law and the index
/// band, so two grids on the same box with the same band produce the same
/// fields.
pub fn generate_corpus(spec: &FieldCorpusSpec) -> Result<Vec<PhysicalField>> {
    spec.validate()?;
    let design = match spec.law {
        SpectrumLaw::Mixed => Some(mixed_design(spec.seed, spec.count)),
        _ => None,
    };
    (0..spec.count)
        .into_par_iter()
        .map(|i| corpus_member(spec, i, design.as_ref().map(|d| d[i])))
        .collect()
}

fn corpus_member(
    spec: &FieldCorpusSpec,
    index: usize,
    mixed: Option<(usize, [f64; 3])>,
) -> Result<PhysicalField> {
    let g = &spec.grid;
    let (k1, k2) = spec.band();
    let (w1, w2) = (2.0 * PI / g.lx(), 2.0 * PI / g.ly());
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let k_max = (k1 as f64 * w1).min(k2 as f64 * w2);
    let env = match mixed {
        Some((family, p)) => mixed_envelope(family, p, k_max),
        None => Envelope {
            law: spec.law,
            stretch: 1.0,
        },
    };

    let mut v = SpectralField::zeros(g.clone());
    for s1 in 0..=k1 {
        for s2 in -k2..=k2 {
            if s1 == 0 && s2 <= 0 {
                continue;
            }
            let phase = rng.gen_range(0.0..2.0 * PI);
            let amp = env.at(s1 as f64 * w1, s2 as f64 * w2);
            if amp == 0.0 {
                continue;
            }
            let c = Complex64::from_polar(amp, phase);
            let idx = |a, b| Option::zip(g.lattice_index(Axis::X, a), g.lattice_index(Axis::Y, b));
            let (Some(p), Some(q)) = (idx(s1, s2), idx(-s1, -s2)) else {
                continue;
            };
            v.coeffs_mut()[p] = c;
            v.coeffs_mut()[q] = c.conj();
        }
    }
    let e = v.energy();
    if e == 0.0 {
        return Err(Error::InvalidParameter {
            name: "spectrum_law",
            value: k_max,
            reason: "envelope has no support inside the band",
        });
    }
    inverse_transform(&v.scaled(1.0 / e.sqrt()))
}

/// Which inequality a ratio tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// `‖∇^γΛ_a^{1−α_a/2}u‖` against `‖∇^γΛ_x^{α₁/2}u‖^θ‖Λ_x^{α₁/2}u‖^{1−θ}`
    /// plus the `y` analogue, for the direction `a`.
    Dissipative(Axis),
    /// Same left side against `‖∇^γΛ_x^{α₁/2}u‖^s‖∇^γu‖^{1−s}` plus the
    /// `y` analogue.
    Gradient(Axis),
    /// `‖u‖_∞` against `‖u‖_{Ḣ²}^{1/2}‖u‖_{L²}^{1/2}`.
    GagliardoNirenberg,
}

impl RatioKind {
    pub const ALL: [RatioKind; 5] = [
        RatioKind::Dissipative(Axis::X),
        RatioKind::Dissipative(Axis::Y),
        RatioKind::Gradient(Axis::X),
        RatioKind::Gradient(Axis::Y),
        RatioKind::GagliardoNirenberg,
    ];

    /// Interpolation exponents of the two right-hand terms.
    pub fn exponents(self, gamma: u32, d: &DissipationSpec) -> Option<(f64, f64)> {
        let (a1, a2, g) = (d.alpha1(), d.alpha2(), gamma as f64);
        let mixed = (2.0 * g + 2.0 - a1 - a2) / (2.0 * g);
        match self {
            RatioKind::Dissipative(Axis::X) => Some(((g + 1.0 - a1) / g, mixed)),
            RatioKind::Dissipative(Axis::Y) => Some((mixed, (g + 1.0 - a2) / g)),
            RatioKind::Gradient(Axis::X) => Some(((2.0 - a1) / a1, (2.0 - a1) / a2)),
            RatioKind::Gradient(Axis::Y) => Some(((2.0 - a2) / a1, (2.0 - a2) / a2)),
            RatioKind::GagliardoNirenberg => None,
        }
    }
}

impl fmt::Display for RatioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = |a: &Axis| match a {
            Axis::X => "x",
            Axis::Y => "y",
        };
        match self {
            RatioKind::Dissipative(a) => write!(f, "dissipative_{}", axis(a)),
            RatioKind::Gradient(a) => write!(f, "gradient_{}", axis(a)),
            RatioKind::GagliardoNirenberg => write!(f, "gagliardo_nirenberg"),
        }
    }
}

/// The spectral seminorms every interpolation ratio is assembled from.
#[derive(Debug, Clone, Copy)]
struct Seminorms {
    /// `‖∇^γΛ_x^{1−α₁/2}u‖`, `‖∇^γΛ_y^{1−α₂/2}u‖`
    lhs: (f64, f64),
    /// `‖∇^γΛ_x^{α₁/2}u‖`, `‖∇^γΛ_y^{α₂/2}u‖`
    top: (f64, f64),
    /// `‖Λ_x^{α₁/2}u‖`, `‖Λ_y^{α₂/2}u‖`
    diss: (f64, f64),
    /// `‖∇^γu‖`
    grad: f64,
}

impl Seminorms {
    fn of(v: &SpectralField, gamma: u32, d: &DissipationSpec) -> Self {
        let (a1, a2) = (d.alpha1(), d.alpha2());
        let (xi1, xi2) = (v.grid().xi1(), v.grid().xi2());
        let mut acc = [0.0; 7];
        for ((j, k), z) in v.coeffs().indexed_iter() {
            let e = z.norm_sqr();
            if e == 0.0 {
                continue;
            }
            let (p, q) = (xi1[j].abs(), xi2[k].abs());
            let g = radial_weight(p * p + q * q, gamma as f64) * e;
            let (dx, dy) = (p.powf(a1), q.powf(a2));
            acc[0] += g * p.powf(2.0 - a1);
            acc[1] += g * q.powf(2.0 - a2);
            acc[2] += g * dx;
            acc[3] += g * dy;
            acc[4] += e * dx;
            acc[5] += e * dy;
            acc[6] += g;
        }
        let n = acc.map(|x| (x / v.grid().area()).sqrt());
        Self {
            lhs: (n[0], n[1]),
            top: (n[2], n[3]),
            diss: (n[4], n[5]),
            grad: n[6],
        }
    }

    fn ratio(&self, kind: RatioKind, exps: (f64, f64)) -> Option<f64> {
        let (th1, th2) = exps;
        let (lhs, rhs) = match kind {
            RatioKind::Dissipative(a) => (
                self.side(a),
                self.top.0.powf(th1) * self.diss.0.powf(1.0 - th1)
                    + self.top.1.powf(th2) * self.diss.1.powf(1.0 - th2),
            ),
            RatioKind::Gradient(a) => (
                self.side(a),
                self.top.0.powf(th1) * self.grad.powf(1.0 - th1)
                    + self.top.1.powf(th2) * self.grad.powf(1.0 - th2),
            ),
            RatioKind::GagliardoNirenberg => unreachable!("handled by gn_ratio"),
        };
        finite_ratio(lhs, rhs)
    }

    fn side(&self, a: Axis) -> f64 {
        match a {
            Axis::X => self.lhs.0,
            Axis::Y => self.lhs.1,
        }
    }
}

fn finite_ratio(lhs: f64, rhs: f64) -> Option<f64> {
    let r = lhs / rhs;
    (rhs > 0.0 && r.is_finite()).then_some(r)
}

fn check_gamma(gamma: u32) -> Result<()> {
    if gamma == 0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: 0.0,
            reason: "Sobolev order must be a positive integer",
        });
    }
    Ok(())
}

fn spectrum_on(u: &PhysicalField, d: &DissipationSpec) -> Result<SpectralField> {
    if u.grid() != d.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(forward_transform(u))
}

/// `LHS/RHS` for the dissipative interpolation in direction `axis`;
/// `None` marks a degenerate sample with zero right side.
pub fn dissipative_ratio(
    u: &PhysicalField,
    gamma: u32,
    d: &DissipationSpec,
    axis: Axis,
) -> Result<Option<f64>> {
    check_gamma(gamma)?;
    let kind = RatioKind::Dissipative(axis);
    let s = Seminorms::of(&spectrum_on(u, d)?, gamma, d);
    Ok(s.ratio(kind, kind.exponents(gamma, d).unwrap()))
}

/// `LHS/RHS` for the gradient-anchored interpolation in direction `axis`.
pub fn gradient_ratio(
    u: &PhysicalField,
    gamma: u32,
    d: &DissipationSpec,
    axis: Axis,
) -> Result<Option<f64>> {
    check_gamma(gamma)?;
    let kind = RatioKind::Gradient(axis);
    let s = Seminorms::of(&spectrum_on(u, d)?, gamma, d);
    Ok(s.ratio(kind, kind.exponents(gamma, d).unwrap()))
}

/// `‖u‖_∞ / (‖u‖_{Ḣ²}^{1/2}‖u‖_{L²}^{1/2})`.
pub fn gn_ratio(u: &PhysicalField) -> Option<f64> {
    gn_from(u, &forward_transform(u))
}

fn gn_from(u: &PhysicalField, v: &SpectralField) -> Option<f64> {
    let h2 = v.weighted_energy(|a, b| (a * a + b * b).powi(2)).sqrt();
    let l2 = v.energy().sqrt();
    finite_ratio(u.max_abs(), (h2 * l2).sqrt())
}

/// Ratio statistics over a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub kind: RatioKind,
    pub gamma: u32,
    pub exponents: Option<(f64, f64)>,
    /// Non-degenerate ratios in corpus order.
    pub ratios: Vec<f64>,
    pub degenerate: usize,
    /// NaN when every sample was degenerate.
    pub max: f64,
    pub mean: f64,
    pub min: f64,
}

impl RatioReport {
    fn from_samples(
        kind: RatioKind,
        gamma: u32,
        exponents: Option<(f64, f64)>,
        samples: impl Iterator<Item = Option<f64>>,
    ) -> Self {
        let mut ratios = Vec::new();
        let mut degenerate = 0;
        for s in samples {
            match s {
                Some(r) => ratios.push(r),
                None => degenerate += 1,
            }
        }
        let (mut max, mut min, mut sum) = (f64::NAN, f64::NAN, 0.0);
        for &r in &ratios {
            max = if max.is_nan() { r } else { max.max(r) };
            min = if min.is_nan() { r } else { min.min(r) };
            sum += r;
        }
        let mean = if ratios.is_empty() {
            f64::NAN
        } else {
            sum / ratios.len() as f64
        };
        Self {
            kind,
            gamma,
            exponents,
            ratios,
            degenerate,
            max,
            mean,
            min,
        }
    }
}

/// Evaluates every [`RatioKind`] on every corpus member.
///
/// Members are processed in parallel; the reductions run sequentially in
/// corpus order, so the report is bit-stable.
pub fn evaluate_corpus(
    corpus: &[PhysicalField],
    gamma: u32,
    d: &DissipationSpec,
) -> Result<Vec<RatioReport>> {
    check_gamma(gamma)?;
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let per_field: Vec<[Option<f64>; 5]> = corpus
        .par_iter()
        .map(|u| {
            let v = spectrum_on(u, d)?;
            let s = Seminorms::of(&v, gamma, d);
            Ok(RatioKind::ALL.map(|k| match k.exponents(gamma, d) {
                Some(e) => s.ratio(k, e),
                None => gn_from(u, &v),
            }))
        })
        .collect::<Result<_>>()?;
    Ok(RatioKind::ALL
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            RatioReport::from_samples(k, gamma, k.exponents(gamma, d), per_field.iter().map(|r| r[i]))
        })
        .collect())
}

/// Empirical constant of the pointwise Fourier bound
/// `|û(t,ξ)|² ≤ ‖u₀‖²_{L¹} + C|ξ|∫₀ᵗ‖u‖²_{L²}‖u‖_{L¹}dτ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBoundReport {
    /// `(s1, s2, sup_t C*)` per probe, in probe order.
    pub per_probe: Vec<(i64, i64, f64)>,
    pub sup: f64,
    /// `max |û(t,ξ)| / ‖u(t)‖_{L¹}` over probes and snapshots; at most 1.
    pub max_l1_ratio: f64,
}

/// `snapshots` must be time-ordered and start at the initial datum.
pub fn fourier_bound_report(
    snapshots: &[(f64, SpectralField)],
    probes: &[(i64, i64)],
) -> Result<FourierBoundReport> {
    let Some((_, first)) = snapshots.first() else {
        return Err(Error::Empty("snapshots"));
    };
    let g = first.grid().clone();
    let mut lattice = Vec::with_capacity(probes.len());
    for &(s1, s2) in probes {
        match (g.lattice_index(Axis::X, s1), g.lattice_index(Axis::Y, s2)) {
            (Some(j), Some(k)) if (s1, s2) != (0, 0) => {
                let xi = g.xi1()[j].hypot(g.xi2()[k]);
                lattice.push((j, k, xi));
            }
            _ => {
                return Err(Error::InvalidGrid(format!(
                    "probe ({s1}, {s2}) is the origin or outside the lattice"
                )))
            }
        }
    }

    let mut norms = Vec::with_capacity(snapshots.len());
    for (t, v) in snapshots {
        if v.grid() != &g {
            return Err(Error::GridMismatch);
        }
        let u = inverse_transform(v)?;
        norms.push((*t, lp_norm(&u, 1.0)?, lp_norm(&u, 2.0)?));
    }
    let l1_0 = norms[0].1;

    let mut per_probe: Vec<_> = probes.iter().map(|&(a, b)| (a, b, 0.0)).collect();
    let mut max_l1_ratio: f64 = 0.0;
    let mut integral = 0.0;
    for (n, (_, v)) in snapshots.iter().enumerate() {
        if n > 0 {
            let ((t0, a1, a2), (t1, b1, b2)) = (norms[n - 1], norms[n]);
            integral += 0.5 * (t1 - t0) * (a2 * a2 * a1 + b2 * b2 * b1);
        }
        for (p, &(j, k, xi)) in lattice.iter().enumerate() {
            let m = v.coeffs()[(j, k)].norm();
            if norms[n].1 > 0.0 {
                max_l1_ratio = max_l1_ratio.max(m / norms[n].1);
            }
            let excess = (m * m - l1_0 * l1_0).max(0.0);
            if integral > 0.0 {
                let c = excess / (xi * integral);
                per_probe[p].2 = f64::max(per_probe[p].2, c);
            }
        }
    }
    let sup = per_probe.iter().map(|p| p.2).fold(0.0, f64::max);
    Ok(FourierBoundReport {
        per_probe,
        sup,
        max_l1_ratio,
    })
}
