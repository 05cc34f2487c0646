//! Empirical constants for `|J_{+-s}(r)| <= C r^{+-s}` (r < 1) and `<= C r^(-1/2)` (r >= 1).

use serde::{Deserialize, Serialize};

use super::j::{bessel_j, BesselOrder};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselBoundFit {
    pub nu: f64,
    /// Largest ratio over `r < 1`.
    pub small_r: f64,
    /// Largest ratio over `r >= 1`.
    pub large_r: f64,
    pub samples: usize,
}

impl BesselBoundFit {
    pub fn constant(&self) -> f64 {
        self.small_r.max(self.large_r)
    }
}

/// Sup of `|J_nu(r)| / bound(r)` over `samples` log-spaced points in `[r_min, r_max]`.
pub fn fit_bessel_bound(nu: f64, r_min: f64, r_max: f64, samples: usize) -> Result<BesselBoundFit> {
    let order = BesselOrder::new(nu)?;
    let (lmin, lmax) = (r_min.ln(), r_max.ln());
    let mut fit = BesselBoundFit {
        nu,
        small_r: 0.0,
        large_r: 0.0,
        samples,
    };
    for i in 0..samples {
        let r = (lmin + (lmax - lmin) * i as f64 / (samples - 1) as f64).exp();
        let j = bessel_j(order, r)?.abs();
        if r < 1.0 {
            fit.small_r = fit.small_r.max(j / r.powf(nu));
        } else {
            fit.large_r = fit.large_r.max(j * r.sqrt());
        }
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_finite_and_stable() {
        for nu in [-0.9, -0.5, -0.1, 0.1, 0.5, 0.9] {
            let coarse = fit_bessel_bound(nu, 1e-3, 1e3, 2001).unwrap();
            let fine = fit_bessel_bound(nu, 1e-3, 1e3, 4001).unwrap();
            assert!(coarse.constant().is_finite());
            assert!((fine.constant() - coarse.constant()).abs() <= 0.1 * coarse.constant());
            // large-r constant is at most sqrt(2/pi) asymptotically, up to the transition region
            assert!(fine.large_r < 1.0);
        }
    }
}
