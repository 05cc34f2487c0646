//! Test data: analytic bump functions and band-passed fields.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::field::{Field, SpectralField};
use super::grid::TorusGrid;
use super::ops::gradient;
use super::transform::{dft, idft};
use crate::error::{Error, Result};

/// A real function on `R^d` that can be evaluated anywhere, with its gradient.
///
/// Kernel quadratures sample these off-grid.
pub trait SpatialFunction: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Writes `grad f(x)` into `out[..dim]`.
    fn gradient(&self, x: &[f64], out: &mut [f64]);

    /// Radius `R` such that the function vanishes (to working precision)
    /// outside the ball of radius `R` around [`center`](Self::center), if any.
    fn support_radius(&self) -> Option<f64> {
        None
    }

    fn center(&self) -> [f64; 3] {
        [0.0; 3]
    }

    /// Samples the function on the grid points (no periodization).
    fn sample(&self, grid: &TorusGrid) -> Field {
        Field::from_real_fn(*grid, |x| self.value(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BumpShape {
    /// `a exp(-|x-c|^2 / (2 w^2))`
    Gaussian,
    /// `a (d - |x-c|^2/w^2) exp(-|x-c|^2 / (2 w^2))`, i.e. `-w^2 Delta` of the Gaussian.
    /// Integrates to zero over `R^d`, so its Fourier transform vanishes at the origin.
    Ricker,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: [f64; 3],
    pub width: f64,
    pub amplitude: f64,
}

/// Sum of Gaussian or Ricker bumps in dimension `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpSet {
    pub dim: usize,
    pub shape: BumpShape,
    pub bumps: Vec<Bump>,
}

impl BumpSet {
    pub fn single(dim: usize, shape: BumpShape, width: f64) -> Self {
        Self {
            dim,
            shape,
            bumps: vec![Bump {
                center: [0.0; 3],
                width,
                amplitude: 1.0,
            }],
        }
    }

    /// `count` bumps with centers in `[-spread, spread]^d`, widths in
    /// `[w_min, w_max]` and amplitudes in `[-1, 1]`.
    pub fn random(
        dim: usize,
        shape: BumpShape,
        count: usize,
        spread: f64,
        widths: (f64, f64),
        rng: &mut impl Rng,
    ) -> Self {
        let bumps = (0..count)
            .map(|_| {
                let mut center = [0.0; 3];
                for c in center.iter_mut().take(dim) {
                    *c = rng.gen_range(-spread..=spread);
                }
                Bump {
                    center,
                    width: rng.gen_range(widths.0..=widths.1),
                    amplitude: rng.gen_range(-1.0..=1.0),
                }
            })
            .collect();
        Self { dim, shape, bumps }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=5).contains(&self.dim) {
            return Err(Error::invalid("dim", format!("bump dimension must be 1..=5, got {}", self.dim)));
        }
        if self.bumps.is_empty() {
            return Err(Error::invalid("bumps", "at least one bump is required"));
        }
        if self.bumps.iter().any(|b| !(b.width > 0.0)) {
            return Err(Error::invalid("bumps", "bump widths must be positive"));
        }
        Ok(())
    }

    fn offset(&self, b: &Bump, x: &[f64]) -> ([f64; 5], f64) {
        let mut z = [0.0; 5];
        let mut r2 = 0.0;
        for a in 0..self.dim {
            let c = if a < 3 { b.center[a] } else { 0.0 };
            z[a] = x[a] - c;
            r2 += z[a] * z[a];
        }
        (z, r2)
    }

    /// Smallest radius beyond which every bump is below `1e-16` of its amplitude.
    pub fn negligible_radius(&self) -> f64 {
        self.bumps
            .iter()
            .map(|b| {
                let c = b.center[..self.dim.min(3)].iter().map(|v| v * v).sum::<f64>().sqrt();
                c + 9.0 * b.width
            })
            .fold(0.0, f64::max)
    }
}

impl SpatialFunction for BumpSet {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        let d = self.dim as f64;
        self.bumps
            .iter()
            .map(|b| {
                let (_, r2) = self.offset(b, x);
                let q = r2 / (b.width * b.width);
                let g = b.amplitude * (-0.5 * q).exp();
                match self.shape {
                    BumpShape::Gaussian => g,
                    BumpShape::Ricker => g * (d - q),
                }
            })
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim as f64;
        out[..self.dim].iter_mut().for_each(|v| *v = 0.0);
        for b in &self.bumps {
            let (z, r2) = self.offset(b, x);
            let w2 = b.width * b.width;
            let q = r2 / w2;
            let g = b.amplitude * (-0.5 * q).exp();
            // d/dz_a of the profile, divided by z_a
            let radial = match self.shape {
                BumpShape::Gaussian => -g / w2,
                BumpShape::Ricker => -g / w2 * (d - q) - 2.0 * g / w2,
            };
            for a in 0..self.dim {
                out[a] += radial * z[a];
            }
        }
    }
}

/// The constant function.
#[derive(Debug, Clone, Copy)]
pub struct Constant {
    pub dim: usize,
    pub value: f64,
}

impl SpatialFunction for Constant {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, _x: &[f64]) -> f64 {
        self.value
    }
    fn gradient(&self, _x: &[f64], out: &mut [f64]) {
        out[..self.dim].iter_mut().for_each(|v| *v = 0.0);
    }
}

/// `a exp(-1/(1 - |x-c|^2/R^2))` inside the ball of radius `R`, exactly zero outside.
#[derive(Debug, Clone, Copy)]
pub struct CompactBump {
    pub dim: usize,
    pub center: [f64; 3],
    pub radius: f64,
    pub amplitude: f64,
}

impl CompactBump {
    fn local(&self, x: &[f64]) -> ([f64; 5], f64) {
        let mut z = [0.0; 5];
        let mut r2 = 0.0;
        for a in 0..self.dim {
            z[a] = x[a] - if a < 3 { self.center[a] } else { 0.0 };
            r2 += z[a] * z[a];
        }
        (z, r2 / (self.radius * self.radius))
    }
}

impl SpatialFunction for CompactBump {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        let (_, q) = self.local(x);
        if q >= 1.0 {
            0.0
        } else {
            self.amplitude * (-1.0 / (1.0 - q)).exp()
        }
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let (z, q) = self.local(x);
        out[..self.dim].iter_mut().for_each(|v| *v = 0.0);
        if q < 1.0 {
            let v = self.amplitude * (-1.0 / (1.0 - q)).exp();
            let dq = -v / ((1.0 - q) * (1.0 - q));
            for a in 0..self.dim {
                out[a] = dq * 2.0 * z[a] / (self.radius * self.radius);
            }
        }
    }

    fn support_radius(&self) -> Option<f64> {
        Some(self.radius)
    }

    fn center(&self) -> [f64; 3] {
        self.center
    }
}

/// Exact off-grid evaluation of a band-limited field via its Fourier series.
///
/// Evaluation costs `O(n^d)` per point.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    coeffs: SpectralField,
}

impl TrigInterpolant {
    pub fn new(field: &Field) -> Self {
        Self { coeffs: dft(field) }
    }

    pub fn from_coefficients(coeffs: SpectralField) -> Self {
        Self { coeffs }
    }

    fn axis_phases(&self, x: &[f64]) -> Vec<Vec<Complex64>> {
        let grid = self.coeffs.grid();
        let x0 = grid.coordinate(0);
        let step = grid.frequency_step();
        (0..grid.dim())
            .map(|a| {
                (0..grid.n())
                    .map(|j| {
                        if grid.wavenumber(j) == -(grid.n() as i64) / 2 {
                            // Nyquist: use the cosine so real data stays real
                            let k = grid.wavenumber(j) as f64;
                            Complex64::new((step * k * (x[a] - x0)).cos(), 0.0)
                        } else {
                            Complex64::from_polar(1.0, step * grid.wavenumber(j) as f64 * (x[a] - x0))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Evaluates `sum_k c_k m(k) e^{i xi.(x-x0)}` for a per-index weight `m`.
    fn evaluate_weighted(&self, x: &[f64], weight: impl Fn(usize) -> Complex64) -> Complex64 {
        let grid = self.coeffs.grid();
        let phases = self.axis_phases(x);
        let c = self.coeffs.values();
        (0..grid.len())
            .map(|flat| {
                let idx = grid.multi_index(flat);
                let mut p = Complex64::new(1.0, 0.0);
                for (a, ph) in phases.iter().enumerate() {
                    p *= ph[idx[a]];
                }
                c[flat] * weight(flat) * p
            })
            .sum()
    }
}

impl SpatialFunction for TrigInterpolant {
    fn dim(&self) -> usize {
        self.coeffs.grid().dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.evaluate_weighted(x, |_| Complex64::new(1.0, 0.0)).re
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let grid = *self.coeffs.grid();
        let step = grid.frequency_step();
        for (a, o) in out.iter_mut().enumerate().take(grid.dim()) {
            *o = self
                .evaluate_weighted(x, |flat| {
                    if grid.is_nyquist(flat) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(0.0, step * grid.wavevector(flat)[a] as f64)
                    }
                })
                .re;
        }
    }
}

/// Frequency annulus `[lo, hi]` for band-passing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    /// Smooth window: zero outside `[lo, hi]`, one on the middle half, `C^inf` ramps of width `(hi-lo)/4`.
    pub fn window(&self, r: f64) -> f64 {
        let w = 0.25 * (self.hi - self.lo);
        smooth_step((r - self.lo) / w) * smooth_step((self.hi - r) / w)
    }
}

fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// Output of [`make_test_data`].
#[derive(Debug, Clone)]
pub struct TestData {
    pub field: Field,
    /// Fourier coefficients after filtering; the zero mode of a band-passed
    /// field is exactly 0 here, while `dft(field)` carries rounding.
    pub coefficients: SpectralField,
    /// Spectral gradient, one field per axis.
    pub gradient: Vec<Field>,
    /// Off-grid evaluator of the (band-limited) field and its gradient.
    pub interpolant: TrigInterpolant,
}

/// Samples real bumps on `grid` and optionally band-passes them to an annulus.
pub fn make_test_data(grid: &TorusGrid, bumps: &BumpSet, band: Option<Band>) -> Result<TestData> {
    bumps.validate()?;
    if bumps.dim != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}-d bumps", grid.dim()),
            found: format!("{}-d bumps", bumps.dim),
        });
    }
    let raw = bumps.sample(grid);
    let (field, coefficients) = match band {
        None => {
            let c = dft(&raw);
            (raw, c)
        }
        Some(band) => {
            if !(band.lo > 0.0 && band.lo < band.hi && band.hi < grid.nyquist_radius()) {
                return Err(Error::invalid(
                    "band",
                    format!(
                        "need 0 < lo < hi < Nyquist radius {:.6}, got [{}, {}]",
                        grid.nyquist_radius(),
                        band.lo,
                        band.hi
                    ),
                ));
            }
            let coeffs = dft(&raw);
            let filtered = coeffs.map_indexed(|i, c| {
                let r = grid.xi_squared(i).sqrt();
                c * band.window(r)
            });
            if filtered.values().iter().all(|c| c.norm() == 0.0) {
                return Err(Error::invalid("band", "no lattice frequency falls inside the band"));
            }
            (idft(&filtered), filtered)
        }
    };
    // Hermitian symmetrization: the filter is real and even, so only rounding is discarded
    let field = field.to_real();
    let gradient = gradient(&field);
    let interpolant = TrigInterpolant::new(&field);
    Ok(TestData {
        field,
        coefficients,
        gradient,
        interpolant,
    })
}

/// Surface area of the unit sphere `S^(d-1)` in `R^d`.
pub fn unit_sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / crate::special::gamma(d as f64 / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_removes_zero_mode_exactly() {
        let grid = TorusGrid::new(2, 32, 20.0).unwrap();
        let bumps = BumpSet::single(2, BumpShape::Gaussian, 1.0);
        let data = make_test_data(&grid, &bumps, Some(Band { lo: 0.5, hi: 3.0 })).unwrap();
        assert_eq!(data.coefficients.zero_mode(), Complex64::new(0.0, 0.0));
        let c = dft(&data.field);
        assert!(c.zero_mode().norm() <= 1e-15 * c.max_abs());
        assert_eq!(data.field.max_imag(), 0.0);
    }

    #[test]
    fn empty_band_is_rejected() {
        let grid = TorusGrid::new(1, 32, 20.0).unwrap();
        let bumps = BumpSet::single(1, BumpShape::Gaussian, 1.0);
        for band in [Band { lo: 2.0, hi: 1.0 }, Band { lo: 0.0, hi: 1.0 }, Band { lo: 1.0, hi: 100.0 }] {
            assert!(make_test_data(&grid, &bumps, Some(band)).is_err());
        }
        // a band narrower than the lattice spacing holds no frequency
        let narrow = Band { lo: 0.32, hi: 0.33 };
        assert!(make_test_data(&grid, &bumps, Some(narrow)).is_err());
    }

    #[test]
    fn spectral_gradient_matches_analytic_gaussian() {
        let grid = TorusGrid::new(1, 64, 16.0).unwrap();
        let bumps = BumpSet::single(1, BumpShape::Gaussian, 1.0);
        let data = make_test_data(&grid, &bumps, None).unwrap();
        let exact = Field::from_real_fn(grid, |x| {
            let mut g = [0.0];
            bumps.gradient(x, &mut g);
            g[0]
        });
        let err = data.gradient[0].relative_distance(&exact).unwrap();
        assert!(err <= 1e-8, "err={err}");
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        let h = 1e-6;
        let x = [0.3, -0.2, 0.5];
        let fns: Vec<Box<dyn SpatialFunction>> = vec![
            Box::new(BumpSet::single(3, BumpShape::Gaussian, 0.8)),
            Box::new(BumpSet::single(3, BumpShape::Ricker, 0.8)),
            Box::new(CompactBump {
                dim: 3,
                center: [0.1, 0.0, 0.0],
                radius: 1.2,
                amplitude: 2.0,
            }),
        ];
        for f in &fns {
            let mut g = [0.0; 3];
            f.gradient(&x, &mut g);
            for a in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[a] += h;
                xm[a] -= h;
                let fd = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
                assert!((fd - g[a]).abs() < 1e-8, "axis {a}: {fd} vs {}", g[a]);
            }
        }
    }

    #[test]
    fn interpolant_reproduces_grid_values_and_modes() {
        let grid = TorusGrid::new(2, 16, 2.0 * PI).unwrap();
        let f = Field::from_real_fn(grid, |x| (2.0 * x[0]).cos() + (x[0] - 3.0 * x[1]).sin());
        let interp = TrigInterpolant::new(&f);
        for flat in [0, 17, 100] {
            let x = grid.point(flat);
            assert!((interp.value(&x[..2]) - f.values()[flat].re).abs() < 1e-12);
        }
        let x = [0.123f64, -0.77];
        let exact = (2.0 * x[0]).cos() + (x[0] - 3.0 * x[1]).sin();
        assert!((interp.value(&x) - exact).abs() < 1e-12);
        let mut g = [0.0; 2];
        interp.gradient(&x, &mut g);
        assert!((g[0] - (-2.0 * (2.0 * x[0]).sin() + (x[0] - 3.0 * x[1]).cos())).abs() < 1e-12);
        assert!((g[1] + 3.0 * (x[0] - 3.0 * x[1]).cos()).abs() < 1e-12);
    }

    #[test]
    fn ricker_has_vanishing_mean() {
        let grid = TorusGrid::new(2, 64, 16.0).unwrap();
        let f = BumpSet::single(2, BumpShape::Ricker, 0.9).sample(&grid);
        let c0 = dft(&f).zero_mode().norm();
        assert!(c0 < 1e-14 * f.max_abs(), "{c0}");
    }

    #[test]
    fn sphere_areas() {
        for (d, exact) in [(1, 2.0), (2, 2.0 * PI), (3, 4.0 * PI), (4, 2.0 * PI * PI)] {
            assert!((unit_sphere_area(d) - exact).abs() < 1e-14 * exact, "d={d}");
        }
    }
}
