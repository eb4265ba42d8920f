use ndarray::{Array2, Zip};
use rustfft::num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::fft2;
use super::grid::{signed_index, GridSpec};
use crate::error::{Error, Result};

/// Largest relative Hermitian asymmetry accepted by [`inverse_transform`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Real samples `u(x_i, y_j)` of one scalar state, indexed `[i, j]` with `i`
/// along x.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: GridSpec,
    values: Array2<f64>,
}

impl PhysicalField {
    pub fn new(grid: GridSpec, values: Array2<f64>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonfiniteState { t: f64::NAN });
        }
        Ok(Self {
            grid,
            values: values.as_standard_layout().into_owned(),
        })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        let values = Array2::zeros(grid.shape());
        Self { grid, values }
    }

    /// Samples `f(x, y)` at the grid nodes.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let (dx, dy) = (grid.dx(), grid.dy());
        let values = Array2::from_shape_fn(grid.shape(), |(i, j)| f(i as f64 * dx, j as f64 * dy));
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: &self.values * factor,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Fourier coefficients on the full complex lattice, normalized so that
/// `coeffs[j,k] = dx·dy·Σ u(x,y)·exp(−i(ξ₁x+ξ₂y))` approximates the
/// continuous transform.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Array2<Complex64>,
}

impl SpectralField {
    pub fn new(grid: GridSpec, coeffs: Array2<Complex64>) -> Result<Self> {
        if coeffs.dim() != grid.shape() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid,
            coeffs: coeffs.as_standard_layout().into_owned(),
        })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        let coeffs = Array2::zeros(grid.shape());
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeffs
    }

    /// Coefficient at signed lattice indices, if on the lattice.
    pub fn at(&self, s1: i64, s2: i64) -> Option<Complex64> {
        let j = self.grid.lattice_index(super::Axis::X, s1)?;
        let k = self.grid.lattice_index(super::Axis::Y, s2)?;
        Some(self.coeffs[(j, k)])
    }

    /// Multiplies every coefficient by the real symbol `weight(ξ₁, ξ₂)`.
    pub fn multiplied(&self, weight: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = self.clone();
        out.multiply_in_place(weight);
        out
    }

    pub fn multiply_in_place(&mut self, weight: impl Fn(f64, f64) -> f64) {
        let (xi1, xi2) = (self.grid.xi1().to_vec(), self.grid.xi2().to_vec());
        for ((j, k), c) in self.coeffs.indexed_iter_mut() {
            *c *= weight(xi1[j], xi2[k]);
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: &self.coeffs * factor,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid.clone(),
            coeffs: &self.coeffs + &other.coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid.clone(),
            coeffs: &self.coeffs - &other.coeffs,
        })
    }

    /// `(1/(lx·ly))·Σ w(ξ)|v̂(ξ)|²`: the squared L² norm of the multiplier
    /// `√w` applied to the field, via Parseval.
    pub fn weighted_energy(&self, weight: impl Fn(f64, f64) -> f64) -> f64 {
        let (xi1, xi2) = (self.grid.xi1(), self.grid.xi2());
        let mut sum = 0.0;
        for ((j, k), c) in self.coeffs.indexed_iter() {
            let n = c.norm_sqr();
            if n != 0.0 {
                sum += weight(xi1[j], xi2[k]) * n;
            }
        }
        sum / self.grid.area()
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.grid.area()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    /// Largest `|v̂(ξ) − conj(v̂(−ξ))|`, relative to the largest coefficient.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let (nx, ny) = self.grid.shape();
        let mut worst = 0.0f64;
        for ((j, k), c) in self.coeffs.indexed_iter() {
            let partner = self.coeffs[((nx - j) % nx, (ny - k) % ny)];
            worst = worst.max((c - partner.conj()).norm());
        }
        worst / scale
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

pub fn forward_transform(u: &PhysicalField) -> SpectralField {
    let mut coeffs = u.values.mapv(|v| Complex64::new(v, 0.0));
    fft2(&mut coeffs, FftDirection::Forward);
    let w = u.grid.cell_area();
    coeffs.mapv_inplace(|c| c * w);
    SpectralField {
        grid: u.grid.clone(),
        coeffs,
    }
}

pub fn inverse_transform(v: &SpectralField) -> Result<PhysicalField> {
    let asymmetry = v.hermitian_asymmetry();
    if asymmetry > HERMITIAN_TOLERANCE {
        return Err(Error::MalformedSpectrum { asymmetry });
    }
    Ok(inverse_unchecked(v))
}

/// Inverse transform without the symmetry audit; the imaginary residue is
/// discarded. Used on states that are symmetric by construction.
pub(crate) fn inverse_unchecked(v: &SpectralField) -> PhysicalField {
    let mut work = v.coeffs.clone();
    fft2(&mut work, FftDirection::Inverse);
    let norm = 1.0 / v.grid.area();
    let mut values = Array2::zeros(v.grid.shape());
    Zip::from(&mut values)
        .and(&work)
        .for_each(|u, c| *u = c.re * norm);
    PhysicalField {
        grid: v.grid.clone(),
        values,
    }
}

/// Largest retained `|j̃|` on an axis of `n` points when products of
/// degree `kappa + 1` must be alias-free: `(κ+2)·|j̃| < n`.
pub fn retained_band(n: usize, kappa: u32) -> usize {
    let k2 = kappa as usize + 2;
    (n - 1) / k2
}

/// 2/3-rule truncation for the quadratic flux.
pub fn dealias(v: &SpectralField) -> SpectralField {
    dealias_for(v, 1)
}

/// Truncation that keeps degree-`(κ+1)` products alias-free.
pub fn dealias_for(v: &SpectralField, kappa: u32) -> SpectralField {
    let mut out = v.clone();
    dealias_in_place(&mut out, kappa);
    out
}

pub(crate) fn dealias_in_place(v: &mut SpectralField, kappa: u32) {
    let (nx, ny) = v.grid.shape();
    let (bx, by) = (retained_band(nx, kappa) as i64, retained_band(ny, kappa) as i64);
    for ((j, k), c) in v.coeffs.indexed_iter_mut() {
        if signed_index(j, nx).abs() > bx || signed_index(k, ny).abs() > by {
            *c = Complex64::default();
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::spectral::make_grid;

    fn unit_box(n: usize) -> GridSpec {
        make_grid(n, n, 2.0 * PI, 2.0 * PI).unwrap()
    }

    fn random_field(grid: &GridSpec, seed: u64) -> PhysicalField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = Array2::from_shape_fn(grid.shape(), |_| rng.gen_range(-1.0..1.0));
        PhysicalField::new(grid.clone(), values).unwrap()
    }

    #[test]
    fn constant_field_keeps_only_mean() {
        let g = make_grid(8, 16, 3.0, 2.0).unwrap();
        let u = PhysicalField::from_fn(g.clone(), |_, _| 1.5).unwrap();
        let v = forward_transform(&u);
        for ((j, k), c) in v.coeffs().indexed_iter() {
            if (j, k) == (0, 0) {
                assert!((c.re - 1.5 * 6.0).abs() < 1e-12 && c.im.abs() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cosine_has_two_modes_of_half_area() {
        let g = unit_box(16);
        let u = PhysicalField::from_fn(g.clone(), |x, _| x.cos()).unwrap();
        let v = forward_transform(&u);
        let half = g.area() / 2.0;
        for ((j, k), c) in v.coeffs().indexed_iter() {
            let s1 = signed_index(j, 16);
            if k == 0 && s1.abs() == 1 {
                assert!((c - Complex64::new(half, 0.0)).norm() < 1e-10);
            } else {
                assert!(c.norm() < 1e-10, "({j},{k}) = {c}");
            }
        }
        let back = inverse_transform(&v).unwrap();
        for (a, b) in back.values().iter().zip(u.values().iter()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_spectrum_inverts_to_zero() {
        let g = unit_box(8);
        let u = inverse_transform(&SpectralField::zeros(g)).unwrap();
        assert!(u.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn broken_symmetry_is_rejected() {
        let g = unit_box(8);
        let mut v = SpectralField::zeros(g);
        v.coeffs_mut()[(1, 0)] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            inverse_transform(&v),
            Err(Error::MalformedSpectrum { .. })
        ));
    }

    #[test]
    fn round_trip_on_random_fields() {
        let g = make_grid(32, 16, 5.0, 3.0).unwrap();
        for seed in 0..100 {
            let u = random_field(&g, seed);
            let back = inverse_transform(&forward_transform(&u)).unwrap();
            let err = back
                .values()
                .iter()
                .zip(u.values())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err <= 1e-12 * u.max_abs(), "seed {seed}: {err}");
        }
    }

    #[test]
    fn parseval_on_random_fields() {
        let g = make_grid(32, 24, 7.0, 2.5).unwrap();
        for seed in 0..20 {
            let u = random_field(&g, seed);
            let physical = u.values().iter().map(|v| v * v).sum::<f64>() * g.cell_area();
            let spectral = forward_transform(&u).energy();
            assert!(((physical - spectral) / physical).abs() <= 1e-12);
        }
    }

    #[test]
    fn transform_is_linear() {
        let g = unit_box(16);
        let (u, w) = (random_field(&g, 1), random_field(&g, 2));
        let (a, b) = (2.5, -0.75);
        let combo = PhysicalField::new(g.clone(), u.values() * a + w.values() * b).unwrap();
        let lhs = forward_transform(&combo);
        let rhs = forward_transform(&u)
            .scaled(a)
            .add(&forward_transform(&w).scaled(b))
            .unwrap();
        let scale = lhs.max_abs();
        for (l, r) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            assert!((l - r).norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn forward_of_real_field_is_hermitian() {
        let g = make_grid(16, 8, 1.0, 1.0).unwrap();
        let v = forward_transform(&random_field(&g, 9));
        assert!(v.hermitian_asymmetry() < 1e-14);
    }

    #[test]
    fn dealias_examples() {
        let g = unit_box(8);
        let zero = SpectralField::zeros(g.clone());
        assert_eq!(dealias(&zero), zero);

        // Band |j̃| ≤ 8/3 is kept.
        let inside = forward_transform(
            &PhysicalField::from_fn(g.clone(), |x, y| (2.0 * x).cos() + (x - 2.0 * y).sin())
                .unwrap(),
        );
        // Only round-off lives outside the band.
        assert!(dealias(&inside).sub(&inside).unwrap().max_abs() < 1e-13);

        let mut outside = SpectralField::zeros(g.clone());
        outside.coeffs_mut()[(3, 0)] = Complex64::new(1.0, 0.0);
        assert_eq!(dealias(&outside), SpectralField::zeros(g));
    }

    #[test]
    fn retained_band_keeps_products_alias_free() {
        assert_eq!(retained_band(8, 1), 2);
        assert_eq!(retained_band(512, 1), 170);
        assert_eq!(retained_band(12, 1), 3);
        assert_eq!(retained_band(512, 2), 127);
        for n in (8..200).step_by(2) {
            for kappa in 1..4u32 {
                let b = retained_band(n, kappa);
                assert!((kappa as usize + 2) * b < n);
                assert!((kappa as usize + 2) * (b + 1) >= n);
            }
        }
    }

    proptest! {
        #[test]
        fn dealias_is_idempotent(seed in any::<u64>(), kappa in 1u32..4) {
            let g = make_grid(16, 12, 2.0, 3.0).unwrap();
            let v = forward_transform(&random_field(&g, seed));
            let once = dealias_for(&v, kappa);
            prop_assert_eq!(dealias_for(&once, kappa), once);
        }
    }
}
