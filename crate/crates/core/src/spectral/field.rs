use num_complex::Complex64;

use super::grid::TorusGrid;
use crate::error::{Error, Result};

/// Complex samples `F(x_j)` on a [`TorusGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: TorusGrid,
    data: Vec<Complex64>,
}

/// Fourier coefficients indexed by the frequency lattice of a [`TorusGrid`],
/// in FFT storage order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    data: Vec<Complex64>,
}

macro_rules! grid_storage {
    ($ty:ident) => {
        impl $ty {
            pub fn from_vec(grid: TorusGrid, data: Vec<Complex64>) -> Result<Self> {
                if data.len() != grid.len() {
                    return Err(Error::DimensionMismatch {
                        expected: format!("{} values", grid.len()),
                        found: format!("{} values", data.len()),
                    });
                }
                Ok(Self { grid, data })
            }

            pub fn zeros(grid: TorusGrid) -> Self {
                Self {
                    grid,
                    data: vec![Complex64::new(0.0, 0.0); grid.len()],
                }
            }

            pub fn grid(&self) -> &TorusGrid {
                &self.grid
            }

            pub fn values(&self) -> &[Complex64] {
                &self.data
            }

            pub fn values_mut(&mut self) -> &mut [Complex64] {
                &mut self.data
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.data
            }

            /// Plain discrete norm `(sum |v_j|^2)^(1/2)`.
            pub fn norm(&self) -> f64 {
                self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
            }

            pub fn max_abs(&self) -> f64 {
                self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }

            pub fn scale(&mut self, factor: Complex64) {
                for v in &mut self.data {
                    *v *= factor;
                }
            }

            pub fn scaled(&self, factor: Complex64) -> Self {
                let mut out = self.clone();
                out.scale(factor);
                out
            }

            /// `self + alpha * other`.
            pub fn axpy(&self, alpha: Complex64, other: &Self) -> Result<Self> {
                self.grid.check_same(&other.grid)?;
                let data = self
                    .data
                    .iter()
                    .zip(&other.data)
                    .map(|(a, b)| a + alpha * b)
                    .collect();
                Ok(Self {
                    grid: self.grid,
                    data,
                })
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.axpy(Complex64::new(-1.0, 0.0), other)
            }
        }
    };
}

grid_storage!(Field);
grid_storage!(SpectralField);

impl Field {
    pub fn from_real(grid: TorusGrid, values: &[f64]) -> Result<Self> {
        Self::from_vec(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f` at every grid point; the closure receives the point padded to 3 components.
    pub fn from_fn(grid: TorusGrid, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let data = (0..grid.len())
            .map(|i| {
                let x = grid.point(i);
                f(&x[..grid.dim()])
            })
            .collect();
        Self { grid, data }
    }

    pub fn from_real_fn(grid: TorusGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// Continuum-scaled norm `(h^d sum |F_j|^2)^(1/2)`, approximating the L2 norm on the box.
    pub fn l2_norm(&self) -> f64 {
        self.norm() * self.grid.cell_volume().sqrt()
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.data.iter().map(|v| v.re).collect()
    }

    /// Drops imaginary parts.
    pub fn to_real(&self) -> Self {
        Self {
            grid: self.grid,
            data: self.data.iter().map(|v| Complex64::new(v.re, 0.0)).collect(),
        }
    }

    pub fn imag_as_real(&self) -> Self {
        Self {
            grid: self.grid,
            data: self.data.iter().map(|v| Complex64::new(v.im, 0.0)).collect(),
        }
    }

    /// Fails unless the imaginary parts are negligible relative to the field's size.
    pub fn require_real(&self) -> Result<()> {
        let max_imag = self.max_imag();
        if max_imag > 1e-12 * self.max_abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NonRealField { max_imag });
        }
        Ok(())
    }

    /// `||self - other|| / ||other||`, or the absolute difference if `other` vanishes.
    pub fn relative_distance(&self, other: &Field) -> Result<f64> {
        let diff = self.sub(other)?.norm();
        let reference = other.norm();
        Ok(if reference > 0.0 { diff / reference } else { diff })
    }
}

impl SpectralField {
    /// Coefficient at the zero frequency (storage slot 0).
    pub fn zero_mode(&self) -> Complex64 {
        self.data[0]
    }

    /// Multiplies every coefficient by `m(flat index)`.
    pub fn map_indexed(&self, m: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let data = self.data.iter().enumerate().map(|(i, &c)| m(i, c)).collect();
        Self {
            grid: self.grid,
            data,
        }
    }
}
