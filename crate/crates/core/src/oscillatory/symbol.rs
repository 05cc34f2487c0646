use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{phi_integral, OscillatoryValue, QuadratureSpec};
use crate::bessel::{bessel_j, bessel_j_scaled, BesselOrder};
use crate::error::{Error, Result};
use crate::order::FractionalOrder;
use crate::special::{gamma, i_pow};

/// How the symbol `I_sigma(lambda, t)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolRoute {
    /// Contour quadrature of the oscillatory integral.
    #[default]
    Contour,
    /// Closed form through `J_{+-sigma}` and the connection formula for `K_sigma(ir)`.
    BesselK,
}

fn check_lambda_t(lambda: f64, t: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("lambda", format!("must be finite and >= 0, got {lambda}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("must be finite and > 0, got {t}")));
    }
    Ok(())
}

/// `i^sigma int_0^inf e^(-is) s^(sigma-1) ds`, which equals `Gamma(sigma)`.
pub fn gamma_oscillatory(sigma: FractionalOrder, quad: &QuadratureSpec) -> Result<OscillatoryValue> {
    Ok(phi_integral(sigma.value(), 0.0, quad)?.scaled(sigma.i_sigma()))
}

/// `I_sigma(lambda, t) = (i^sigma / Gamma(sigma)) int_0^inf e^(-is) e^(-i t^2 lambda / 4s) s^(sigma-1) ds`.
pub fn symbol_i(sigma: FractionalOrder, lambda: f64, t: f64, quad: &QuadratureSpec) -> Result<OscillatoryValue> {
    check_lambda_t(lambda, t)?;
    let a = 0.5 * t * lambda.sqrt();
    let s = sigma.value();
    Ok(phi_integral(s, a, quad)?.scaled(sigma.i_sigma() / gamma(s)))
}

/// `I_sigma` through Bessel functions:
/// `2^(-sigma) Gamma(1-sigma) r^sigma (J_{-sigma}(r) - i^(2 sigma) J_sigma(r))`, `r = t sqrt(lambda)`.
pub fn symbol_i_bessel(sigma: FractionalOrder, lambda: f64, t: f64) -> Result<Complex64> {
    check_lambda_t(lambda, t)?;
    let s = sigma.value();
    let r = t * lambda.sqrt();
    let jm = bessel_j_scaled(BesselOrder::new(-s)?, r)?;
    let jp = r.powf(2.0 * s) * bessel_j_scaled(BesselOrder::new(s)?, r)?;
    Ok(2f64.powf(-s) * gamma(1.0 - s) * (Complex64::new(jm, 0.0) - sigma.i_two_sigma() * jp))
}

/// `I_sigma` by the selected route; the contour route fails if its error estimate exceeds `quad.tolerance` by 100x.
pub(crate) fn symbol_value(sigma: FractionalOrder, lambda: f64, t: f64, route: SymbolRoute, quad: &QuadratureSpec) -> Result<Complex64> {
    match route {
        SymbolRoute::BesselK => symbol_i_bessel(sigma, lambda, t),
        SymbolRoute::Contour => {
            let v = symbol_i(sigma, lambda, t, quad)?;
            let limit = 100.0 * quad.tolerance * v.value.norm().max(1.0);
            if v.abs_error_estimate > limit {
                return Err(Error::Convergence {
                    what: "symbol contour quadrature",
                    estimate: v.abs_error_estimate,
                    tolerance: limit,
                });
            }
            Ok(v.value)
        }
    }
}

/// `d_t^sigma I_sigma = -i^(2 sigma) Gamma(1-sigma)/(sigma 4^sigma Gamma(sigma)) lambda^sigma I_{1-sigma}(lambda, t)`.
pub fn symbol_dtn(sigma: FractionalOrder, lambda: f64, t: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    check_lambda_t(lambda, t)?;
    if lambda == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let other = symbol_value(sigma.complement(), lambda, t, SymbolRoute::Contour, quad)?;
    Ok(sigma.dtn_constant() * lambda.powf(sigma.value()) * other)
}

/// `K_sigma(ir) = (r^sigma / 2^(1+sigma)) int_0^inf e^(-ir^2/4s) e^(-is) s^(-1-sigma) ds`.
pub fn modified_bessel_k_imag(sigma: FractionalOrder, r: f64, quad: &QuadratureSpec) -> Result<OscillatoryValue> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", format!("must be finite and > 0, got {r}")));
    }
    let s = sigma.value();
    Ok(phi_integral(-s, 0.5 * r, quad)?.scaled(Complex64::new(r.powf(s) / 2f64.powf(1.0 + s), 0.0)))
}

/// `K_sigma(ir) = (pi/2)(i^-sigma J_{-sigma}(r) - i^sigma J_sigma(r)) / sin(sigma pi)`.
pub fn modified_bessel_k_imag_connection(sigma: FractionalOrder, r: f64) -> Result<Complex64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", format!("must be finite and > 0, got {r}")));
    }
    let s = sigma.value();
    let jm = bessel_j(BesselOrder::new(-s)?, r)?;
    let jp = bessel_j(BesselOrder::new(s)?, r)?;
    Ok(0.5 * PI * (i_pow(-s) * jm - i_pow(s) * jp) / (PI * s).sin())
}

/// `|I'' + ((1-2 sigma)/t) I' + lambda I|` with central differences of step `h` on contour values.
pub fn ode_residual_i(sigma: FractionalOrder, lambda: f64, t: f64, h: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(h > 0.0 && t > h) {
        return Err(Error::invalid("h", format!("need t > h > 0, got t={t}, h={h}")));
    }
    let i = |tt: f64| symbol_value(sigma, lambda, tt, SymbolRoute::Contour, quad);
    let (m, c, p) = (i(t - h)?, i(t)?, i(t + h)?);
    let d2 = (p - 2.0 * c + m) / (h * h);
    let d1 = (p - m) / (2.0 * h);
    Ok((d2 + (1.0 - 2.0 * sigma.value()) / t * d1 + lambda * c).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(s: f64) -> FractionalOrder {
        FractionalOrder::new(s).unwrap()
    }

    #[test]
    fn gamma_identity() {
        let quad = QuadratureSpec::default();
        let v = gamma_oscillatory(order(0.5), &quad).unwrap();
        assert!((v.value.re - PI.sqrt()).abs() < 1e-10 && v.value.im.abs() <= 1e-10);
        for s in [0.3, 0.9] {
            let v = gamma_oscillatory(order(s), &quad).unwrap().value;
            assert!((v - gamma(s)).norm() <= 1e-8 * gamma(s));
        }
    }

    #[test]
    fn symbol_at_zero_frequency_is_one() {
        let quad = QuadratureSpec::default();
        for s in [0.2, 0.5, 0.8] {
            for t in [0.1, 3.0] {
                let v = symbol_i(order(s), 0.0, t, &quad).unwrap().value;
                assert!((v - 1.0).norm() < 1e-12, "{v}");
                assert!((symbol_i_bessel(order(s), 0.0, t).unwrap() - 1.0).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn wave_group_at_half() {
        let quad = QuadratureSpec::default();
        let v = symbol_i(order(0.5), 4.0, 1.0, &quad).unwrap().value;
        assert!((v - Complex64::from_polar(1.0, -2.0)).norm() < 1e-8);
        let b = symbol_i_bessel(order(0.5), 4.0, 1.0).unwrap();
        assert!((b - Complex64::from_polar(1.0, -2.0)).norm() < 1e-13);
    }

    #[test]
    fn depends_only_on_t_squared_lambda() {
        let quad = QuadratureSpec::default();
        let a = symbol_i(order(0.35), 9.0, 0.5, &quad).unwrap().value;
        let b = symbol_i(order(0.35), 2.25, 1.0, &quad).unwrap().value;
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn contour_matches_bessel_route() {
        let quad = QuadratureSpec::default();
        for s in [0.2, 0.5, 0.85] {
            for lambda in [0.01, 1.0, 30.0, 400.0] {
                for t in [0.05, 1.0, 4.0] {
                    let c = symbol_i(order(s), lambda, t, &quad).unwrap().value;
                    let b = symbol_i_bessel(order(s), lambda, t).unwrap();
                    assert!((c - b).norm() < 1e-9, "s={s} l={lambda} t={t}: {c} vs {b}");
                }
            }
        }
    }

    #[test]
    fn k_half_closed_form() {
        let quad = QuadratureSpec::default();
        for r in [1.0, 50.0] {
            let k = modified_bessel_k_imag(order(0.5), r, &quad).unwrap().value;
            let lhs = Complex64::new(0.0, r).sqrt() * k;
            assert!((lhs - (0.5 * PI).sqrt() * Complex64::from_polar(1.0, -r)).norm() < 1e-9);
            assert!((k.norm() - (PI / (2.0 * r)).sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn k_contour_matches_connection_formula() {
        let quad = QuadratureSpec::default();
        let k = modified_bessel_k_imag(order(0.3), 2.0, &quad).unwrap().value;
        let c = modified_bessel_k_imag_connection(order(0.3), 2.0).unwrap();
        assert!((k - c).norm() < 1e-8, "{k} vs {c}");
    }

    #[test]
    fn dtn_closed_form_at_half() {
        let quad = QuadratureSpec::default();
        for t in [0.3, 1.0, 2.0] {
            let v = symbol_dtn(order(0.5), 1.0, t, &quad).unwrap();
            let exact = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -t);
            assert!((v - exact).norm() < 1e-9);
        }
        assert_eq!(symbol_dtn(order(0.3), 0.0, 1.0, &quad).unwrap(), Complex64::new(0.0, 0.0));
        let tiny = symbol_dtn(order(0.3), 1e-12, 1.0, &quad).unwrap();
        assert!(tiny.norm() < 1e-3);
    }

    #[test]
    fn dtn_matches_weighted_finite_difference() {
        // (1/(2 sigma)) t^(1-2 sigma) d/dt I_sigma vs the closed form, errors shrinking like h^2
        let quad = QuadratureSpec::default();
        let (s, lambda, t) = (0.3, 2.0, 1.0);
        let exact = symbol_dtn(order(s), lambda, t, &quad).unwrap();
        let err = |h: f64| {
            let i = |tt| symbol_i(order(s), lambda, tt, &quad).unwrap().value;
            let fd = (i(t + h) - i(t - h)) / (2.0 * h) * t.powf(1.0 - 2.0 * s) / (2.0 * s);
            (fd - exact).norm()
        };
        let (e1, e2) = (err(1e-3), err(5e-4));
        assert!(e1 < 1e-6, "{e1}");
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn ode_residuals() {
        let quad = QuadratureSpec::default();
        assert!(ode_residual_i(order(0.4), 0.0, 1.0, 1e-3, &quad).unwrap() < 1e-9);
        assert!(ode_residual_i(order(0.5), 1.0, 1.0, 1e-3, &quad).unwrap() < 1e-5);
        let r1 = ode_residual_i(order(0.7), 4.0, 0.8, 2e-3, &quad).unwrap();
        let r2 = ode_residual_i(order(0.7), 4.0, 0.8, 1e-3, &quad).unwrap();
        assert!((3.0..5.0).contains(&(r1 / r2)), "{r1} {r2}");
    }
}
