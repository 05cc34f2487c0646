//! Contour-deformed quadrature for the oscillatory integrals behind the solution symbol.
//!
//! Everything reduces to
//!
//! ```text
//! Phi(mu, A) = int_0^inf exp(-i (s + A^2/s)) s^(mu-1) ds,
//! ```
//!
//! a conditionally convergent integral. With `s = A e^z` it becomes
//! `A^mu int e^(mu z) exp(-2iA cosh z) dz`; the path `z = tau + i phi(tau)`,
//! `phi = -theta0 tanh(tau/theta0)`, leaves the real axis upward near `s = 0`
//! and downward near `s = infinity`, where the integrand decays
//! double-exponentially, and crosses the stationary point `s = A` at 45
//! degrees, the steepest-descent direction.

mod contour;
pub(crate) mod symbol;
mod truncated;

pub use contour::phi_integral;
pub use symbol::{
    gamma_oscillatory, modified_bessel_k_imag, modified_bessel_k_imag_connection, ode_residual_i, symbol_dtn, symbol_i,
    symbol_i_bessel, SymbolRoute,
};
pub use truncated::{truncated_integral, truncated_integral_grid};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Discretization parameters for [`phi_integral`] and everything built on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    /// Minimum number of panels per contour piece at the coarsest level.
    pub panels: usize,
    /// Gauss–Legendre nodes per panel.
    pub gl_order: usize,
    /// Angle of the far rays measured from the positive real axis of the
    /// rotated variable; the path's asymptotic tilt is `theta0 = pi - theta_ray`.
    pub theta_ray: f64,
    /// Pieces are truncated once the log-magnitude of the integrand falls
    /// this far below its running maximum.
    pub tail_cutoff: f64,
    /// Half-width of the stationary window in `tau`, in units of `1/sqrt(A)`.
    pub window_factor: f64,
    /// Stop doubling the panel count when successive sums agree to this (relative to `max(1, |value|)`).
    pub tolerance: f64,
    pub max_refinements: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panels: 2,
            gl_order: 20,
            theta_ray: 2.0 * PI / 3.0,
            tail_cutoff: 40.0,
            window_factor: 4.5,
            tolerance: 1e-10,
            max_refinements: 6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta_ray > 0.5 * PI && self.theta_ray < PI) {
            return Err(Error::invalid("theta_ray", format!("must lie in (pi/2, pi), got {}", self.theta_ray)));
        }
        if self.panels == 0 || self.gl_order < 2 {
            return Err(Error::invalid("panels", "need at least one panel and two nodes per panel"));
        }
        if !(self.tail_cutoff >= 10.0 && self.tail_cutoff.is_finite()) {
            return Err(Error::invalid("tail_cutoff", format!("must be >= 10, got {}", self.tail_cutoff)));
        }
        if !(self.window_factor > 0.0) {
            return Err(Error::invalid("window_factor", "must be positive"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance", "must be positive"));
        }
        Ok(())
    }

    /// Asymptotic tilt of the path away from the real axis.
    pub fn theta0(&self) -> f64 {
        PI - self.theta_ray
    }
}

/// Piece of the integration path, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PathPiece {
    /// Rotated toward `arg s = +theta0` near `s = 0`; `tau` in `[from, to]`.
    RayNearZero { from: f64, to: f64 },
    /// Window around the stationary point `s = A`.
    StationaryWindow { from: f64, to: f64 },
    /// Rotated toward `arg s = -theta0` near infinity.
    RayNearInfinity { from: f64, to: f64 },
    /// Single ray `arg s = -theta0` used when `A = 0`.
    Ray { angle: f64, from: f64, to: f64 },
}

/// Result of a contour quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatoryValue {
    pub value: Complex64,
    /// Difference between the last two refinement levels.
    pub abs_error_estimate: f64,
    pub path: Vec<PathPiece>,
    /// Total panels at the finest level.
    pub panels: usize,
}

impl OscillatoryValue {
    pub(crate) fn scaled(mut self, factor: Complex64) -> Self {
        self.value *= factor;
        self.abs_error_estimate *= factor.norm();
        self
    }
}
