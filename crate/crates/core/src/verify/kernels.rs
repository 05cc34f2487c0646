use serde::{Deserialize, Serialize};
use serde_json::json;
use std::f64::consts::PI;

use super::{relative_l2, CheckReport, VerifyConfig};
use crate::bessel::solve_bessel;
use crate::error::Result;
use crate::kernel::{
    ball_potential, classical_d2_solve, classical_d3_solve, descent1d_solve, kernel_solve, spherical_mean_solve,
    KernelQuadrature, KernelSpec, PointQuery, Regime,
};
use crate::order::FractionalOrder;
use crate::special::gamma;
use crate::spectral::{BumpSet, BumpShape, CompactBump, SpatialFunction, TorusGrid};

fn order(s: f64) -> Result<FractionalOrder> {
    FractionalOrder::new(s)
}

/// Grid points on a short segment through the origin, as (flat index, coordinates).
fn grid_queries(grid: &TorusGrid) -> Vec<(usize, Vec<f64>)> {
    let d = grid.dim();
    let n = grid.n();
    let h = grid.spacing();
    let mut out = Vec::new();
    for x in [0.0, 0.25, 0.5, 1.0, 1.5] {
        for diagonal in [false, true] {
            if diagonal && (x == 0.0 || d == 1) {
                continue;
            }
            let j = (x / h).round() as usize;
            let mut idx = vec![n / 2; d];
            idx[0] += j;
            if diagonal {
                idx[1] -= j;
            }
            let flat = grid.flat_index(&idx);
            let p = grid.point(flat)[..d].to_vec();
            out.push((flat, p));
        }
    }
    out
}

/// Relative distance between kernel values and the spectral Neumann solution at grid points.
fn kernel_vs_grid(
    solve: impl Fn(&BumpSet, &PointQuery) -> Result<f64> + Sync,
    d: usize,
    sigma: FractionalOrder,
    grid: TorusGrid,
    width: f64,
    t: f64,
) -> Result<f64> {
    let g = BumpSet::single(d, BumpShape::Ricker, width);
    let field = g.sample(&grid);
    let u = solve_bessel(None, Some(&field), sigma, t, 0.0)?.field;
    let queries = grid_queries(&grid);
    let kernel: Vec<Result<f64>> = crate::par::map(&queries, |(_, p)| solve(&g, &PointQuery::new(p.clone(), t)?));
    let kernel = kernel.into_iter().collect::<Result<Vec<f64>>>()?;
    let spectral: Vec<f64> = queries.iter().map(|(flat, _)| u.values()[*flat].re).collect();
    Ok(relative_l2(&kernel, &spectral))
}

/// Kernel formulas against spectral Neumann solves on a torus that never wraps the ball `B(x, t)`.
pub fn run_kernel_equivalence(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let quad = config.kernel_quad;
    let mut out = Vec::new();
    let cases: [(usize, f64, usize, f64, f64, f64); 4] = [
        (1, 0.3, 256, 32.0, 0.5, 1.0),
        (2, 0.6, 128, 16.0, 0.6, 0.7),
        (3, 0.75, 64, 16.0, 0.7, 0.8),
        (3, 0.25, 64, 16.0, 0.7, 0.8),
    ];
    for (d, s, n, l, w, t) in cases {
        let spec = KernelSpec::new(d, order(s)?)?;
        let grid = TorusGrid::new(d, n, l)?;
        let metric = kernel_vs_grid(|g, q| kernel_solve(g, q, &spec, &quad), d, spec.sigma, grid, w, t)?;
        out.push(CheckReport::new(
            format!("kernel_{:?}_vs_spectral_d{d}_s{s}", spec.regime).to_lowercase(),
            json!({"d": d, "sigma": s, "regime": spec.regime, "n": n, "box": l, "ricker_width": w, "t": t}),
            metric,
            1e-3,
        ));
    }
    out.push(recursion_consistency(4, 0.8, &quad)?);
    Ok(out)
}

/// High-regime kernel against `C (2/t) sin(beta pi) 4^beta Gamma(beta) d_t W_beta` with
/// `beta = d/2 - sigma - 1`, `C = sigma 4^(sigma - d/2) / (pi^(d/2) sin(sigma pi) Gamma(1-sigma))`
/// and `d_t` by a 5-point difference of the ball potential.
fn recursion_consistency(d: usize, s: f64, quad: &KernelQuadrature) -> Result<CheckReport> {
    let sigma = order(s)?;
    let spec = KernelSpec::new(d, sigma)?;
    let beta = spec.gamma - 1.0;
    let c = s * 4f64.powf(s - d as f64 / 2.0) / (PI.powf(d as f64 / 2.0) * sigma.sin_pi() * gamma(1.0 - s));
    let pre = c * (beta * PI).sin() * 4f64.powf(beta) * gamma(beta);
    let g = BumpSet::single(d, BumpShape::Gaussian, 0.7);
    let t = 0.8;
    let h = 1e-2 * t;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for x in [0.0, 0.3, 0.7] {
        let mut p = vec![0.0; d];
        p[0] = x;
        p[1] = -0.5 * x;
        let w = |tt: f64| ball_potential(&g, &PointQuery::new(p.clone(), tt)?, beta, quad);
        let dw = (w(t - 2.0 * h)? - 8.0 * w(t - h)? + 8.0 * w(t + h)? - w(t + 2.0 * h)?) / (12.0 * h);
        a.push(kernel_solve(&g, &PointQuery::new(p.clone(), t)?, &spec, quad)?);
        b.push(pre * 2.0 / t * dw);
    }
    Ok(CheckReport::new(
        format!("kernel_high_recursion_d{d}_s{s}"),
        json!({"d": d, "sigma": s, "beta": beta, "t": t, "h": h}),
        relative_l2(&a, &b),
        1e-3,
    ))
}

/// A sequence of orders along which the kernel solution tends to the spherical mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitStudy {
    pub d: usize,
    pub sigmas: Vec<f64>,
}

impl LimitStudy {
    /// `d = 2` with `sigma -> 0`, `d = 3` with `sigma -> 1/2` from both sides, `d = 4` with `sigma -> 1`.
    pub fn standard() -> Vec<Self> {
        vec![
            Self {
                d: 2,
                sigmas: vec![0.2, 0.1, 0.05, 0.01, 0.002],
            },
            Self {
                d: 3,
                sigmas: vec![0.4, 0.45, 0.49, 0.499],
            },
            Self {
                d: 3,
                sigmas: vec![0.6, 0.55, 0.51, 0.501],
            },
            Self {
                d: 4,
                sigmas: vec![0.8, 0.9, 0.95, 0.99, 0.998],
            },
        ]
    }
}

/// Distances from kernel solutions to `(1/(c_d t)) int_{partial B} g dS` along the study's orders.
///
/// Reports the largest ratio of consecutive distances (below 1 when the
/// decrease is monotone) and the final distance.
pub fn run_limit_study(study: &LimitStudy, config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let quad = config.kernel_quad;
    let d = study.d;
    let g = BumpSet::single(d, BumpShape::Gaussian, 0.8);
    let t = 1.0;
    let points: Vec<Vec<f64>> = [0.0, 0.3, 0.6]
        .iter()
        .map(|&x| {
            let mut p = vec![0.0; d];
            p[0] = x;
            p[d - 1] += 0.5 * x;
            p
        })
        .collect();
    let limit = points
        .iter()
        .map(|p| spherical_mean_solve(&g, &PointQuery::new(p.clone(), t)?, d, &quad))
        .collect::<Result<Vec<f64>>>()?;
    let mut distances = Vec::new();
    for &s in &study.sigmas {
        let spec = KernelSpec::new(d, order(s)?)?;
        let u = points
            .iter()
            .map(|p| kernel_solve(&g, &PointQuery::new(p.clone(), t)?, &spec, &quad))
            .collect::<Result<Vec<f64>>>()?;
        distances.push(relative_l2(&u, &limit));
    }
    let ratio = distances.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    let tag = format!("d{d}_from_s{}", study.sigmas[0]);
    let params = json!({"d": d, "sigmas": study.sigmas, "t": t, "distances": distances});
    Ok(vec![
        CheckReport::new(format!("limit_monotone_{tag}"), params.clone(), ratio, 1.0),
        CheckReport::new(format!("limit_final_{tag}"), params, *distances.last().unwrap_or(&f64::NAN), 1e-2),
    ])
}

/// The `d = 2, 3` averaging formulas against `sigma = 1/2` spectral Neumann solves.
pub(crate) fn classical_averages(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let quad = config.kernel_quad;
    let half = order(0.5)?;
    let d2 = kernel_vs_grid(|g, q| classical_d2_solve(g, q, &quad), 2, half, TorusGrid::new(2, 128, 16.0)?, 0.6, 0.7)?;
    let d3 = kernel_vs_grid(|g, q| classical_d3_solve(g, q, &quad), 3, half, TorusGrid::new(3, 64, 16.0)?, 0.7, 0.8)?;
    Ok(vec![
        CheckReport::new(
            "classical_planar_average_vs_spectral",
            json!({"d": 2, "n": 128, "box": 16.0, "ricker_width": 0.6, "t": 0.7}),
            d2,
            1e-6,
        ),
        CheckReport::new(
            "classical_spherical_average_vs_spectral",
            json!({"d": 3, "n": 64, "box": 16.0, "ricker_width": 0.7, "t": 0.8}),
            d3,
            1e-6,
        ),
    ])
}

/// The 1D descent formula tends to `(1/2) int_{x-t}^{x+t} g` as `sigma` decreases to 1/2.
pub(crate) fn descent_limit(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let w = 0.5;
    let g = BumpSet::single(1, BumpShape::Gaussian, w);
    let (x, t) = (0.2, 0.9);
    let erf = statrs::function::erf::erf;
    let k = w * 2f64.sqrt();
    let half = 0.5 * w * (0.5 * PI).sqrt() * (erf((x + t) / k) - erf((x - t) / k));
    let sigmas = [0.51, 0.501, 0.5001];
    let errors = sigmas
        .iter()
        .map(|&s| Ok((descent1d_solve(&g, &PointQuery::new(vec![x], t)?, order(s)?, &config.kernel_quad)? - half).abs() / half))
        .collect::<Result<Vec<f64>>>()?;
    let ratio = errors.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    let params = json!({"sigmas": sigmas, "x": x, "t": t, "relative_errors": errors});
    Ok(vec![
        CheckReport::new("descent_limit_monotone", params.clone(), ratio, 1.0),
        CheckReport::new("descent_limit_final", params, errors[2], 1e-4),
    ])
}

/// Every kernel returns exactly 0 for data supported outside `B(x, t)`.
pub(crate) fn kernel_support(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let quad = config.kernel_quad;
    let t = 1.0;
    let radius = 0.5;
    let data = |d: usize| {
        let mut center = [0.0; 3];
        center[0] = t + radius;
        CompactBump {
            dim: d,
            center,
            radius,
            amplitude: 1.0,
        }
    };
    let q = |d: usize| PointQuery::new(vec![0.0; d], t);
    let mut worst: f64 = 0.0;
    let mut regimes = Vec::new();
    for (d, s) in [(1, 0.3), (1, 0.5), (1, 0.7), (2, 0.6), (3, 0.25), (3, 0.5), (3, 0.75), (4, 0.8), (5, 0.7)] {
        let spec = KernelSpec::new(d, order(s)?)?;
        regimes.push(json!([d, s, spec.regime]));
        worst = worst.max(kernel_solve(&data(d), &q(d)?, &spec, &quad)?.abs());
    }
    for d in 2..=4 {
        worst = worst.max(spherical_mean_solve(&data(d), &q(d)?, d, &quad)?.abs());
    }
    worst = worst.max(classical_d2_solve(&data(2), &q(2)?, &quad)?.abs());
    worst = worst.max(classical_d3_solve(&data(3), &q(3)?, &quad)?.abs());
    debug_assert!(regimes.len() == 9 && Regime::Low != Regime::High);
    Ok(vec![CheckReport::new(
        "kernel_exact_zero_outside_ball",
        json!({"t": t, "support": "ball of radius 0.5 tangent to B(x,t) from outside", "cases": regimes}),
        worst,
        0.0,
    )])
}

