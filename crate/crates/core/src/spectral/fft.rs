//! Unnormalized 2D complex DFTs on row-major `(nx, ny)` arrays.
//!
//! Rows (axis 1) are contiguous and transformed in place; axis 0 goes through
//! a transposed scratch buffer so every 1D transform runs on contiguous data.

use std::cell::RefCell;
use std::sync::Arc;

use ndarray::Array2;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction))
}

/// In-place `Σ a[j,k] exp(∓2πi(jp/nx + kq/ny))`, sign set by `direction`.
pub(crate) fn fft2(data: &mut Array2<Complex64>, direction: FftDirection) {
    let (nx, ny) = data.dim();
    let row_plan = plan(ny, direction);
    let col_plan = plan(nx, direction);
    let mut scratch = vec![
        Complex64::default();
        row_plan
            .get_inplace_scratch_len()
            .max(col_plan.get_inplace_scratch_len())
    ];

    let buf = data
        .as_slice_mut()
        .expect("spectral arrays are kept in standard layout");
    row_plan.process_with_scratch(buf, &mut scratch);

    let mut transposed = vec![Complex64::default(); nx * ny];
    transpose(buf, &mut transposed, nx, ny);
    col_plan.process_with_scratch(&mut transposed, &mut scratch);
    transpose(&transposed, buf, ny, nx);
}

/// `src` is `rows × cols` row-major; `dst` becomes `cols × rows`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const BLOCK: usize = 32;
    for r0 in (0..rows).step_by(BLOCK) {
        for c0 in (0..cols).step_by(BLOCK) {
            for r in r0..(r0 + BLOCK).min(rows) {
                for c in c0..(c0 + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Direct O(N²) DFT as an oracle for the transposed-FFT path.
    fn naive_dft(a: &Array2<Complex64>) -> Array2<Complex64> {
        let (nx, ny) = a.dim();
        Array2::from_shape_fn((nx, ny), |(p, q)| {
            let mut s = Complex64::default();
            for j in 0..nx {
                for k in 0..ny {
                    let phase = -2.0 * PI * ((j * p) as f64 / nx as f64 + (k * q) as f64 / ny as f64);
                    s += a[(j, k)] * Complex64::from_polar(1.0, phase);
                }
            }
            s
        })
    }

    #[test]
    fn matches_direct_dft_on_rectangular_grid() {
        let a = Array2::from_shape_fn((8, 12), |(j, k)| {
            Complex64::new((j as f64 * 0.7 + k as f64).sin(), (j * k) as f64 * 0.01)
        });
        let mut fast = a.clone();
        fft2(&mut fast, FftDirection::Forward);
        let slow = naive_dft(&a);
        for (f, s) in fast.iter().zip(slow.iter()) {
            assert!((f - s).norm() < 1e-10, "{f} vs {s}");
        }
    }
}
