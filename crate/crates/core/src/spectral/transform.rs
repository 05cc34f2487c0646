//! Discrete Fourier transform on a [`TorusGrid`].
//!
//! Normalization: the forward transform carries the factor `1/n^d`,
//!
//! ```text
//! c_k = n^-d * sum_j F_j exp(-2 pi i k.j / n),     F_j = sum_k c_k exp(2 pi i k.j / n),
//! ```
//!
//! so a constant field maps to its value at `k = 0`, and Parseval reads
//! `||c|| = n^(-d/2) ||F||`. Because samples start at `x_0 = -L/2`, the
//! coefficients are those of the Fourier series in the shifted variable
//! `x - x_0`; every multiplier in this crate depends on `|xi|` only, which
//! makes the shift irrelevant.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::field::{Field, SpectralField};
use super::grid::TorusGrid;

/// Parseval factor `||dft(F)|| / ||F||`.
pub fn parseval_factor(grid: &TorusGrid) -> f64 {
    (grid.len() as f64).sqrt().recip()
}

fn transform_in_place(grid: &TorusGrid, data: &mut [Complex64], direction: FftDirection) {
    let n = grid.n();
    let d = grid.dim();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft(n, direction);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];

    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        let lines = grid.len() / n;
        for l in 0..lines {
            // decompose the line index into (outer, inner) around `axis`
            let outer = l / stride;
            let inner = l % stride;
            let base = outer * stride * n + inner;
            for (j, v) in line.iter_mut().enumerate() {
                *v = data[base + j * stride];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (j, v) in line.iter().enumerate() {
                data[base + j * stride] = *v;
            }
        }
    }
}

pub fn dft(field: &Field) -> SpectralField {
    let grid = *field.grid();
    let mut data = field.values().to_vec();
    transform_in_place(&grid, &mut data, FftDirection::Forward);
    let scale = 1.0 / grid.len() as f64;
    for v in &mut data {
        *v *= scale;
    }
    SpectralField::from_vec(grid, data).expect("length preserved")
}

pub fn idft(coeffs: &SpectralField) -> Field {
    let grid = *coeffs.grid();
    let mut data = coeffs.values().to_vec();
    transform_in_place(&grid, &mut data, FftDirection::Inverse);
    Field::from_vec(grid, data).expect("length preserved")
}
