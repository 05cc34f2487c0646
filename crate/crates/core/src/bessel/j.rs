//! Bessel functions of the first kind for real order `|nu| < 1`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{gamma, DoubleDouble};

/// Crossover between the ascending series and the Hankel expansion.
///
/// The series alternates with terms as large as `e^r / r`, so it is summed in
/// double-double; at `r = 20` that still leaves about 20 digits.
pub const R_SWITCH: f64 = 20.0;

/// Order of a Bessel function, restricted to `(-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BesselOrder {
    nu: f64,
}

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > -1.0 && nu < 1.0) {
            return Err(Error::invalid("nu", format!("Bessel order must lie in (-1, 1), got {nu}")));
        }
        Ok(Self { nu })
    }

    pub fn value(self) -> f64 {
        self.nu
    }
}

impl TryFrom<f64> for BesselOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BesselOrder> for f64 {
    fn from(o: BesselOrder) -> f64 {
        o.nu
    }
}

/// `sum_k (-q)^k / (k! (nu+1)_k)` with `q = r^2/4`, i.e. `Gamma(nu+1) (r/2)^(-nu) J_nu(r)`.
fn series_sum(nu: f64, r: f64) -> f64 {
    let q = DoubleDouble::product(r, r).mul_f64(0.25);
    let mut term = DoubleDouble::from_f64(1.0);
    let mut sum = term;
    for k in 1..400 {
        let kf = k as f64;
        let denom = DoubleDouble::sum(kf, nu).mul_f64(kf);
        term = term.mul(q).div(denom).neg();
        sum = sum.add(term);
        if term.abs_f64() < 1e-34 * sum.abs_f64().max(1e-300) && kf * kf > q.hi {
            break;
        }
    }
    sum.to_f64()
}

/// Hankel expansion: returns `(P, Q)` truncated just before the smallest term.
fn hankel_pq(nu: f64, r: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let next = term * (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * r);
        if next.abs() >= last || next == 0.0 {
            break;
        }
        last = next.abs();
        term = next;
        // sign pattern: P gets a_0 - a_2 + a_4 ..., Q gets a_1 - a_3 + ...
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if last < 1e-18 {
            break;
        }
    }
    (p, q)
}

fn hankel_j(nu: f64, r: f64) -> f64 {
    let (p, q) = hankel_pq(nu, r);
    // chi = r - c with c = (nu/2 + 1/4) pi; expand to avoid rounding r - c
    let c = (0.5 * nu + 0.25) * PI;
    let (sr, cr) = r.sin_cos();
    let (sc, cc) = c.sin_cos();
    let cos_chi = cr * cc + sr * sc;
    let sin_chi = sr * cc - cr * sc;
    (2.0 / (PI * r)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// `J_nu(r)` for `r >= 0`; `r = 0` is rejected for negative orders, where `J_nu` is singular.
pub fn bessel_j(order: BesselOrder, r: f64) -> Result<f64> {
    let nu = order.nu;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("Bessel argument must be finite and >= 0, got {r}")));
    }
    if r == 0.0 {
        return if nu < 0.0 {
            Err(Error::invalid("r", "J_nu(0) is infinite for negative order"))
        } else if nu == 0.0 {
            Ok(1.0)
        } else {
            Ok(0.0)
        };
    }
    Ok(if r <= R_SWITCH {
        (0.5 * r).powf(nu) / gamma(nu + 1.0) * series_sum(nu, r)
    } else {
        hankel_j(nu, r)
    })
}

/// `r^(-nu) J_nu(r)`, an entire function of `r`; equals `2^(-nu) / Gamma(nu+1)` at 0.
pub fn bessel_j_scaled(order: BesselOrder, r: f64) -> Result<f64> {
    let nu = order.nu;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::invalid("r", format!("Bessel argument must be finite and >= 0, got {r}")));
    }
    Ok(if r <= R_SWITCH {
        2f64.powf(-nu) / gamma(nu + 1.0) * series_sum(nu, r)
    } else {
        r.powf(-nu) * hankel_j(nu, r)
    })
}

/// Series and asymptotic values at the same point, for crossover diagnostics.
pub fn bessel_j_both_branches(order: BesselOrder, r: f64) -> (f64, f64) {
    let nu = order.nu;
    ((0.5 * r).powf(nu) / gamma(nu + 1.0) * series_sum(nu, r), hankel_j(nu, r))
}
