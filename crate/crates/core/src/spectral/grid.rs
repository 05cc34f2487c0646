use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on the box `[-L/2, L/2)^d` standing in for `R^d`.
///
/// Sample `j` along an axis sits at `-L/2 + j*h` with `h = L/n`. Coefficients
/// are stored in FFT order, so storage slot `j` holds wavenumber `j` for
/// `j < n/2` and `j - n` otherwise; the lattice is `{-n/2, ..., n/2-1}^d`
/// with frequencies `2 pi k / L`. Flat indices are row-major (last axis fastest).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
    box_length: f64,
}

impl TorusGrid {
    pub fn new(dim: usize, n: usize, box_length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::invalid("d", format!("grid dimension must be 1, 2 or 3, got {dim}")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::invalid("n", format!("points per axis must be a power of two >= 2, got {n}")));
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(Error::invalid("box_length", format!("must be positive, got {box_length}")));
        }
        Ok(Self { dim, n, box_length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Volume element `h^d` of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(self.dim as i32)
    }

    /// Fundamental frequency `2 pi / L`.
    pub fn frequency_step(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Largest frequency magnitude along one axis, `pi n / L`.
    pub fn nyquist_radius(&self) -> f64 {
        PI * self.n as f64 / self.box_length
    }

    /// Physical coordinate of sample `j` on any axis.
    pub fn coordinate(&self, j: usize) -> f64 {
        -0.5 * self.box_length + j as f64 * self.spacing()
    }

    /// Signed wavenumber held in storage slot `j`.
    pub fn wavenumber(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Storage slot holding the signed wavenumber `k`.
    pub fn slot_of_wavenumber(&self, k: i64) -> Option<usize> {
        let n = self.n as i64;
        if k < -n / 2 || k >= n / 2 {
            return None;
        }
        Some(if k >= 0 { k as usize } else { (k + n) as usize })
    }

    /// Per-axis indices of a flat index.
    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            idx[axis] = rest % self.n;
            rest /= self.n;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().take(self.dim).fold(0, |acc, &i| acc * self.n + i)
    }

    /// Physical position of a flat index; unused trailing components are 0.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let idx = self.multi_index(flat);
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = self.coordinate(idx[axis]);
        }
        x
    }

    /// Signed wavenumber vector of a flat index.
    pub fn wavevector(&self, flat: usize) -> [i64; 3] {
        let idx = self.multi_index(flat);
        let mut k = [0i64; 3];
        for axis in 0..self.dim {
            k[axis] = self.wavenumber(idx[axis]);
        }
        k
    }

    /// Integer `|k|^2` of a flat index; `|xi|^2 = (2 pi / L)^2 |k|^2`.
    pub fn lattice_norm(&self, flat: usize) -> u64 {
        self.wavevector(flat).iter().map(|&k| (k * k) as u64).sum()
    }

    pub fn xi_squared_of_norm(&self, norm: u64) -> f64 {
        let step = self.frequency_step();
        step * step * norm as f64
    }

    pub fn xi_squared(&self, flat: usize) -> f64 {
        self.xi_squared_of_norm(self.lattice_norm(flat))
    }

    /// True when the flat index carries a Nyquist wavenumber on some axis.
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let half = -(self.n as i64) / 2;
        self.wavevector(flat)[..self.dim].iter().any(|&k| k == half)
    }

    pub fn check_same(&self, other: &TorusGrid) -> Result<()> {
        if self != other {
            return Err(Error::DimensionMismatch {
                expected: format!("{self:?}"),
                found: format!("{other:?}"),
            });
        }
        Ok(())
    }
}

/// Grouping of lattice points by `|k|^2`.
///
/// Radially symmetric multipliers only need one evaluation per distinct norm.
#[derive(Debug, Clone)]
pub struct RadialLattice {
    norms: Vec<u64>,
    slot: Vec<u32>,
}

impl RadialLattice {
    pub fn new(grid: &TorusGrid) -> Self {
        let per_point: Vec<u64> = (0..grid.len()).map(|i| grid.lattice_norm(i)).collect();
        let mut distinct = BTreeMap::new();
        for &k2 in &per_point {
            distinct.entry(k2).or_insert(0u32);
        }
        for (pos, v) in distinct.values_mut().enumerate() {
            *v = pos as u32;
        }
        let slot = per_point.iter().map(|k2| distinct[k2]).collect();
        Self {
            norms: distinct.into_keys().collect(),
            slot,
        }
    }

    /// Distinct integer norms, ascending.
    pub fn norms(&self) -> &[u64] {
        &self.norms
    }

    /// Position in [`norms`](Self::norms) of the norm at each flat index.
    pub fn slots(&self) -> &[u32] {
        &self.slot
    }
}
