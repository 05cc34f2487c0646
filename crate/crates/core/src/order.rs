use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{gamma, i_pow};

/// Order `sigma` of the extension problem, restricted to the open interval (0, 1).
///
/// Carries the branch constants `i^alpha = exp(i*pi*alpha/2)` that appear
/// throughout the solution formulas, and the Dirichlet-to-Neumann constant
/// `-i^(2 sigma) Gamma(1-sigma) / (sigma 4^sigma Gamma(sigma))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder {
    sigma: f64,
}

impl FractionalOrder {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::invalid(
                "sigma",
                format!("sigma must lie in the open interval (0,1), got {sigma}"),
            ));
        }
        Ok(Self { sigma })
    }

    pub fn value(self) -> f64 {
        self.sigma
    }

    /// The order `1 - sigma`, which is again admissible.
    pub fn complement(self) -> Self {
        Self {
            sigma: 1.0 - self.sigma,
        }
    }

    pub fn i_sigma(self) -> Complex64 {
        i_pow(self.sigma)
    }

    pub fn i_minus_sigma(self) -> Complex64 {
        i_pow(-self.sigma)
    }

    pub fn i_two_sigma(self) -> Complex64 {
        i_pow(2.0 * self.sigma)
    }

    /// `i^(1 - 2 sigma)`, the rotation used by the real Dirichlet solution.
    pub fn i_one_minus_two_sigma(self) -> Complex64 {
        i_pow(1.0 - 2.0 * self.sigma)
    }

    /// `i^(sigma - d/2)`.
    pub fn i_sigma_minus_half_dim(self, d: usize) -> Complex64 {
        i_pow(self.sigma - 0.5 * d as f64)
    }

    /// Real magnitude `Gamma(1-sigma) / (sigma 4^sigma Gamma(sigma))` of the DtN constant.
    pub fn dtn_magnitude(self) -> f64 {
        let s = self.sigma;
        gamma(1.0 - s) / (s * 4f64.powf(s) * gamma(s))
    }

    /// `-i^(2 sigma) Gamma(1-sigma) / (sigma 4^sigma Gamma(sigma))`.
    pub fn dtn_constant(self) -> Complex64 {
        if self.sigma == 0.5 {
            // Gamma(1/2) cancels exactly
            return Complex64::new(0.0, -1.0);
        }
        -self.i_two_sigma() * self.dtn_magnitude()
    }

    pub fn sin_pi(self) -> f64 {
        (PI * self.sigma).sin()
    }

    /// Prefactor of the real Neumann combination
    /// `sigma 4^sigma Gamma(sigma) / (sin(sigma pi) Gamma(1-sigma))`.
    pub fn neumann_prefactor(self) -> f64 {
        let s = self.sigma;
        s * 4f64.powf(s) * gamma(s) / (self.sin_pi() * gamma(1.0 - s))
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(order: FractionalOrder) -> f64 {
        order.sigma
    }
}

impl std::fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_endpoints_and_outside() {
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(FractionalOrder::new(bad).is_err(), "{bad}");
        }
        assert!(FractionalOrder::new(1e-9).is_ok());
    }

    #[test]
    fn dtn_constant_at_half_is_minus_i() {
        let s = FractionalOrder::new(0.5).unwrap();
        assert_eq!(s.dtn_constant(), Complex64::new(0.0, -1.0));
        // the generic formula agrees to rounding
        let generic = -s.i_two_sigma() * s.dtn_magnitude();
        assert!((generic - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn branch_constants_unimodular() {
        for sigma in [0.1, 0.37, 0.5, 0.9] {
            let s = FractionalOrder::new(sigma).unwrap();
            for c in [
                s.i_sigma(),
                s.i_minus_sigma(),
                s.i_two_sigma(),
                s.i_one_minus_two_sigma(),
                s.i_sigma_minus_half_dim(3),
            ] {
                assert!((c.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn serde_validates() {
        let ok: FractionalOrder = serde_json::from_str("0.25").unwrap();
        assert_eq!(ok.value(), 0.25);
        assert!(serde_json::from_str::<FractionalOrder>("1.0").is_err());
    }
}
