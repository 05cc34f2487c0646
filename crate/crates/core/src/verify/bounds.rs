use serde_json::json;

use super::spectral::band_passed;
use super::{CheckReport, VerifyConfig};
use crate::bessel::{fit_bessel_bound, fixedtime_ratio};
use crate::error::Result;
use crate::oscillatory::{symbol_i, truncated_integral, truncated_integral_grid, QuadratureSpec};
use crate::order::FractionalOrder;
use crate::spectral::TorusGrid;

const DRIFT: f64 = 0.1;

fn order(s: f64) -> Result<FractionalOrder> {
    FractionalOrder::new(s)
}

/// `|fine - coarse| / coarse`; infinite when the coarse sup is not positive and finite.
fn drift(coarse: f64, fine: f64) -> f64 {
    if coarse.is_finite() && coarse > 0.0 && fine.is_finite() {
        (fine - coarse).abs() / coarse
    } else {
        f64::INFINITY
    }
}

/// Half-decade values from `10^lo` to `10^hi`; the even entries are the decades.
fn half_decades(lo: i32, hi: i32) -> Vec<f64> {
    (2 * lo..=2 * hi).map(|k| 10f64.powf(0.5 * k as f64)).collect()
}

/// Sup of `|int_eps^R ...| / norm(lambda)` over the decade box and the half-decade box.
fn truncated_sups(sigma: f64, lambdas: &[f64], norm: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    let eps = half_decades(-4, -1);
    let r = half_decades(1, 4);
    let (mut coarse, mut fine): (f64, f64) = (0.0, 0.0);
    for &lambda in lambdas {
        let v = truncated_integral_grid(order(sigma)?, lambda, 1.0, &eps, &r, 1)?;
        for (i, row) in v.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                let a = z.norm() / norm(lambda);
                fine = fine.max(a);
                if i % 2 == 0 && j % 2 == 0 {
                    coarse = coarse.max(a);
                }
            }
        }
    }
    Ok((coarse, fine))
}

fn truncated_bounds() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let (c, f) = truncated_sups(0.4, &[1.0], |_| 1.0)?;
    out.push(CheckReport::new(
        "truncated_sup_s0.4",
        json!({"sigma": 0.4, "lambda": [1.0], "t": 1.0, "eps": "1e-4..1e-1", "R": "1e1..1e4", "coarse_sup": c, "fine_sup": f}),
        drift(c, f),
        DRIFT,
    ));
    let s = 0.8;
    let lambdas = [1.0, 1e2, 1e4];
    let (c, f) = truncated_sups(s, &lambdas, |l| 1.0 + l.powf(s / 2.0 - 0.25))?;
    out.push(CheckReport::new(
        "truncated_sup_s0.8_normalized",
        json!({"sigma": s, "lambda": lambdas, "t": 1.0, "eps": "1e-4..1e-1", "R": "1e1..1e4", "coarse_sup": c, "fine_sup": f}),
        drift(c, f),
        DRIFT,
    ));
    // s^(sigma - 3) is not integrable at 0
    let small = truncated_integral(order(0.5)?, 1.0, 1.0, 1e-6, 10.0, 3)?.norm();
    let large = truncated_integral(order(0.5)?, 1.0, 1.0, 1e-2, 10.0, 3)?.norm();
    let growth = small / large;
    out.push(CheckReport::new(
        "truncated_k3_divergence",
        json!({"sigma": 0.5, "lambda": 1.0, "t": 1.0, "k": 3, "R": 10.0, "eps": [1e-2, 1e-6], "growth": growth}),
        1.0 / growth,
        0.1,
    ));
    Ok(out)
}

/// `|(d_t^2 + (1-2 sigma)/t d_t) I_sigma(lambda, t)|` by 5-point differences with `h = 0.05 / sqrt(lambda)`.
fn radial_operator(sigma: FractionalOrder, lambda: f64, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    let h = 0.05 / lambda.sqrt();
    let v = [-2.0, -1.0, 0.0, 1.0, 2.0]
        .iter()
        .map(|k| Ok(symbol_i(sigma, lambda, t + k * h, quad)?.value))
        .collect::<Result<Vec<_>>>()?;
    let d1 = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
    let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
    Ok((d2 + (1.0 - 2.0 * sigma.value()) / t * d1).norm())
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn derivative_growth(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let t = 1.0;
    // 17 log-spaced values in [1e2, 1e4]; the even entries form the coarse set
    let lambdas: Vec<f64> = (0..=16).map(|k| 10f64.powf(2.0 + k as f64 / 8.0)).collect();
    for s in [0.3, 0.7] {
        let sigma = order(s)?;
        let values = crate::par::map(&lambdas, |&l| radial_operator(sigma, l, t, &config.quad));
        let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
        let claim = s / 2.0 + 0.75;
        let slope = log_slope(&lambdas, &values);
        let scaled: Vec<f64> = values.iter().zip(&lambdas).map(|(v, l)| v / l.powf(claim)).collect();
        let fine = scaled.iter().copied().fold(0.0, f64::max);
        let coarse = scaled.iter().step_by(2).copied().fold(0.0, f64::max);
        let params = json!({"sigma": s, "t": t, "lambda": "1e2..1e4", "slope": slope, "claimed_exponent": claim,
                            "coarse_constant": coarse, "fine_constant": fine});
        out.push(CheckReport::new(format!("radial_operator_slope_s{s}"), params.clone(), slope - claim, 0.05));
        out.push(CheckReport::new(format!("radial_operator_constant_s{s}"), params, drift(coarse, fine), DRIFT));
    }
    Ok(out)
}

fn fixedtime(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let draws = 20;
    let sup = |n: usize| -> Result<f64> {
        let grid = TorusGrid::new(1, n, 30.0)?;
        let mut worst: f64 = 0.0;
        for k in 0..draws {
            let f = band_passed(&grid, config.seed, 2 * k)?;
            let g = band_passed(&grid, config.seed, 2 * k + 1)?;
            for s in [0.25, 0.75] {
                for t in [0.1, 1.0, 10.0] {
                    for sob in [0.0, 1.0, 2.0] {
                        worst = worst.max(fixedtime_ratio(Some(&f), Some(&g), order(s)?, t, sob)?);
                    }
                }
            }
        }
        Ok(worst)
    };
    let (coarse, fine) = (sup(64)?, sup(128)?);
    Ok(vec![CheckReport::new(
        "fixedtime_ratio_sup",
        json!({"d": 1, "draws": draws, "sigma": [0.25, 0.75], "t": [0.1, 1.0, 10.0], "s": [0.0, 1.0, 2.0],
               "n": [64, 128], "coarse_sup": coarse, "fine_sup": fine}),
        drift(coarse, fine),
        DRIFT,
    )])
}

fn bessel_bounds() -> Result<Vec<CheckReport>> {
    let mut worst: f64 = 0.0;
    let mut constants = Vec::new();
    for k in 1..=9 {
        for sign in [1.0, -1.0] {
            let nu = sign * 0.1 * k as f64;
            let coarse = fit_bessel_bound(nu, 1e-3, 1e3, 2001)?.constant();
            let fine = fit_bessel_bound(nu, 1e-3, 1e3, 4001)?.constant();
            worst = worst.max(drift(coarse, fine));
            constants.push(json!([nu, fine]));
        }
    }
    Ok(vec![CheckReport::new(
        "bessel_power_bound",
        json!({"r": "1e-3..1e3", "samples": [2001, 4001], "constants": constants}),
        worst,
        DRIFT,
    )])
}

/// Empirical sup bounds: truncated integrals, the radial operator applied to the
/// symbol, the fixed-time Sobolev ratio and the power bounds of `J_{+-sigma}`.
pub fn run_bound_suite(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let mut out = truncated_bounds()?;
    out.extend(derivative_growth(config)?);
    out.extend(fixedtime(config)?);
    out.extend(bessel_bounds()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 2.0, 5.0, 10.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.25)).collect();
        assert!((log_slope(&x, &y) - 1.25).abs() < 1e-12);
    }

    #[test]
    fn drift_rejects_degenerate_sups() {
        assert_eq!(drift(0.0, 1.0), f64::INFINITY);
        assert!((drift(2.0, 2.1) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn boxes_nest() {
        let h = half_decades(-4, -1);
        assert_eq!(h.len(), 7);
        assert!((h[0] - 1e-4).abs() < 1e-18 && (h[6] - 1e-1).abs() < 1e-15);
    }
}
