use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Coordinate direction on the periodic box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Periodic box `[0, lx) × [0, ly)` sampled on an `nx × ny` grid, together
/// with its discrete wavenumber lattice.
///
/// Lattice index `j` along an axis of `n` points carries the signed index
/// `j̃ = j` for `j < n/2` and `j̃ = j − n` otherwise, so the zero mode sits at
/// index 0 and the Nyquist mode at `j̃ = −n/2`.
#[derive(Debug, Clone)]
pub struct GridSpec {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    xi1: Arc<[f64]>,
    xi2: Arc<[f64]>,
}

pub const MIN_POINTS: usize = 8;

impl GridSpec {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < MIN_POINTS || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n}; must be even and at least {MIN_POINTS}"
                )));
            }
        }
        for (name, l) in [("lx", lx), ("ly", ly)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} = {l}; must be positive")));
            }
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            xi1: wavenumbers(nx, lx).into(),
            xi2: wavenumbers(ny, ly).into(),
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    /// Quadrature weight of one grid cell.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn xi1(&self) -> &[f64] {
        &self.xi1
    }

    pub fn xi2(&self) -> &[f64] {
        &self.xi2
    }

    pub fn wavenumbers(&self, axis: Axis) -> &[f64] {
        match axis {
            Axis::X => &self.xi1,
            Axis::Y => &self.xi2,
        }
    }

    pub fn points(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.nx,
            Axis::Y => self.ny,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn y(&self, i: usize) -> f64 {
        i as f64 * self.dy()
    }

    /// Lattice index holding signed index `s` along `axis`, if representable.
    pub fn lattice_index(&self, axis: Axis, s: i64) -> Option<usize> {
        let n = self.points(axis) as i64;
        if s < -n / 2 || s >= n / 2 {
            return None;
        }
        Some(s.rem_euclid(n) as usize)
    }

    /// Index of the lattice point `−ξ` (the Hermitian partner of `j`).
    pub fn mirror(&self, axis: Axis, j: usize) -> usize {
        let n = self.points(axis);
        (n - j) % n
    }
}

impl PartialEq for GridSpec {
    fn eq(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }
}

/// Signed DFT index of lattice position `j` on an axis of `n` points.
pub fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn wavenumbers(n: usize, l: f64) -> Vec<f64> {
    (0..n)
        .map(|j| 2.0 * PI * signed_index(j, n) as f64 / l)
        .collect()
}

pub fn make_grid(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<GridSpec> {
    GridSpec::new(nx, ny, lx, ly)
}
