use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::f64::consts::PI;

use super::{CheckReport, VerifyConfig};
use crate::bessel::solve_bessel;
use crate::error::Result;
use crate::kernel::{kernel_solve, KernelQuadrature, KernelSpec, PointQuery};
use crate::oscillatory::{gamma_oscillatory, modified_bessel_k_imag, ode_residual_i, symbol_i, symbol_i_bessel};
use crate::order::FractionalOrder;
use crate::special::gamma;
use crate::spectral::{
    dft, fractional_power, idft, make_test_data, Band, BumpSet, BumpShape, Field, SpatialFunction, TorusGrid,
    ZeroModeRule,
};
use crate::subordination::{Subordinator, DEFAULT_DTN_TIMES};

fn order(s: f64) -> Result<FractionalOrder> {
    FractionalOrder::new(s)
}

/// Band-passed sum of three random Gaussian bumps; `tag` separates independent draws.
pub(crate) fn band_passed(grid: &TorusGrid, seed: u64, tag: u64) -> Result<Field> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let spread = 0.1 * grid.box_length();
    let bumps = BumpSet::random(grid.dim(), BumpShape::Gaussian, 3, spread, (0.6, 1.2), &mut rng);
    Ok(make_test_data(grid, &bumps, Some(Band { lo: 0.3, hi: 3.0 }))?.field)
}

/// Standard grids for the spectral checks.
pub(crate) fn check_grid(d: usize) -> Result<TorusGrid> {
    match d {
        1 => TorusGrid::new(1, 64, 30.0),
        2 => TorusGrid::new(2, 32, 16.0),
        _ => TorusGrid::new(3, 32, 16.0),
    }
}

pub(crate) fn oscillatory_gamma(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let mut worst: f64 = 0.0;
    for k in 1..=9 {
        let s = 0.1 * k as f64;
        let v = gamma_oscillatory(order(s)?, &config.quad)?.value;
        worst = worst.max((v - gamma(s)).norm() / gamma(s));
    }
    Ok(vec![CheckReport::new(
        "oscillatory_gamma",
        json!({"sigma": "0.1..0.9", "reference": "Lanczos Gamma"}),
        worst,
        1e-8,
    )])
}

pub(crate) fn wave_group(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let half = order(0.5)?;
    let mut worst: f64 = 0.0;
    for t in [0.1, 1.0, 5.0] {
        for l in 0..=100 {
            let lambda = l as f64;
            let v = symbol_i(half, lambda, t, &config.quad)?.value;
            worst = worst.max((v - Complex64::from_polar(1.0, -t * lambda.sqrt())).norm());
        }
    }
    Ok(vec![CheckReport::new(
        "wave_group_half_order",
        json!({"lambda": "0..=100", "t": [0.1, 1.0, 5.0]}),
        worst,
        1e-8,
    )])
}

pub(crate) fn circle_closure(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let mut worst: f64 = 0.0;
    for s in [0.2, 0.5, 0.8] {
        for lambda in [0.5, 5.0, 50.0] {
            for t in [0.2, 1.0, 4.0] {
                let a = symbol_i(order(s)?, lambda, t, &config.quad)?.value;
                let b = symbol_i_bessel(order(s)?, lambda, t)?;
                worst = worst.max((a - b).norm() / b.norm().max(1.0));
            }
        }
    }
    let mut k_err: f64 = 0.0;
    for r in [0.5, 1.0, 5.0, 50.0] {
        let k = modified_bessel_k_imag(order(0.5)?, r, &config.quad)?.value;
        // sqrt(ir) K_1/2(ir) = sqrt(pi/2) e^(-ir)
        let lhs = Complex64::from_polar(r.sqrt(), 0.25 * PI) * k;
        k_err = k_err.max((lhs - Complex64::from_polar((0.5 * PI).sqrt(), -r)).norm());
    }
    Ok(vec![
        CheckReport::new(
            "symbol_contour_vs_bessel_k",
            json!({"sigma": [0.2, 0.5, 0.8], "lambda": [0.5, 5.0, 50.0], "t": [0.2, 1.0, 4.0]}),
            worst,
            1e-7,
        ),
        CheckReport::new("k_half_closed_form", json!({"r": [0.5, 1.0, 5.0, 50.0]}), k_err, 1e-9),
    ])
}

pub(crate) fn symbol_ode(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for s in [0.3, 0.7] {
        for lambda in [1.0, 4.0] {
            let r1 = ode_residual_i(order(s)?, lambda, 1.0, 1e-3, &config.quad)?;
            let r2 = ode_residual_i(order(s)?, lambda, 1.0, 5e-4, &config.quad)?;
            let params = json!({"sigma": s, "lambda": lambda, "t": 1.0, "h": 1e-3});
            out.push(CheckReport::new(format!("ode_residual_s{s}_l{lambda}"), params.clone(), r1, 1e-4));
            let observed = (r1 / r2).log2();
            out.push(CheckReport::new(
                format!("ode_residual_order_s{s}_l{lambda}"),
                json!({"sigma": s, "lambda": lambda, "observed_order": observed}),
                (observed - 2.0).abs(),
                0.3,
            ));
        }
    }
    Ok(out)
}

pub(crate) fn dtn_recovery(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let sub = Subordinator::new(crate::subordination::SubordinationOptions {
        quad: config.quad,
        ..Default::default()
    })?;
    let mut out = Vec::new();
    for d in [1, 2] {
        let grid = check_grid(d)?;
        let f = band_passed(&grid, config.seed, 5)?;
        for s in [0.25, 0.5, 0.75] {
            let sg = order(s)?;
            let got = sub.dtn_extract(&f, sg, &DEFAULT_DTN_TIMES, 0.0)?.scaled(1.0 / sg.dtn_constant());
            let oracle = fractional_power(&f, s, ZeroModeRule::Reject)?;
            out.push(CheckReport::new(
                format!("dtn_recovery_d{d}_s{s}"),
                json!({"d": d, "sigma": s, "n": grid.n(), "box": grid.box_length(), "t_sequence": DEFAULT_DTN_TIMES}),
                got.relative_distance(&oracle)?,
                1e-4,
            ));
        }
    }
    Ok(out)
}

/// Subordination vs Bessel solves of the Dirichlet and Neumann problems.
pub fn run_backend_compare(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let sub = Subordinator::new(crate::subordination::SubordinationOptions {
        quad: config.quad,
        ..Default::default()
    })?;
    let mut out = Vec::new();
    for d in [1, 2, 3] {
        let grid = check_grid(d)?;
        let f = band_passed(&grid, config.seed, 6)?;
        let g = band_passed(&grid, config.seed, 7)?;
        for s in [0.25, 0.5, 0.75] {
            let sg = order(s)?;
            let mut worst: f64 = 0.0;
            for t in [0.3, 1.0] {
                let a = sub.solve_dirichlet_real(&f, sg, t, 0.0)?.field;
                let b = solve_bessel(Some(&f), None, sg, t, 0.0)?.field;
                worst = worst.max(a.relative_distance(&b)?);
                let a = sub.solve_neumann_real(&g, sg, t, 0.0)?.field;
                let b = solve_bessel(None, Some(&g), sg, t, 0.0)?.field;
                worst = worst.max(a.relative_distance(&b)?);
            }
            out.push(CheckReport::new(
                format!("subordination_vs_bessel_d{d}_s{s}"),
                json!({"d": d, "sigma": s, "t": [0.3, 1.0], "n": grid.n(), "problems": ["dirichlet", "neumann"]}),
                worst,
                1e-6,
            ));
        }
    }
    Ok(out)
}

/// `sigma = 1/2` solves of both backends against the `cos(t|xi|)` and `sin(t|xi|)/|xi|` multipliers.
pub(crate) fn classical_multipliers(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let half = order(0.5)?;
    let sub = Subordinator::new(crate::subordination::SubordinationOptions {
        quad: config.quad,
        ..Default::default()
    })?;
    let mut out = Vec::new();
    for d in [1, 2] {
        let grid = check_grid(d)?;
        let f = band_passed(&grid, config.seed, 9)?;
        let mut worst: f64 = 0.0;
        for t in [0.5, 2.0] {
            let c = dft(&f);
            let cos = idft(&c.map_indexed(|i, c| c * (t * grid.xi_squared(i).sqrt()).cos()));
            let sinc = idft(&c.map_indexed(|i, c| {
                let xi = grid.xi_squared(i).sqrt();
                if xi == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * (t * xi).sin() / xi
                }
            }));
            for u in [
                solve_bessel(Some(&f), None, half, t, 0.0)?.field,
                sub.solve_dirichlet_real(&f, half, t, 0.0)?.field,
            ] {
                worst = worst.max(u.relative_distance(&cos)?);
            }
            for u in [
                solve_bessel(None, Some(&f), half, t, 0.0)?.field,
                sub.solve_neumann_real(&f, half, t, 0.0)?.field,
            ] {
                worst = worst.max(u.relative_distance(&sinc)?);
            }
        }
        out.push(CheckReport::new(
            format!("half_order_trig_multipliers_d{d}"),
            json!({"d": d, "t": [0.5, 2.0], "backends": ["bessel", "subordination"]}),
            worst,
            1e-10,
        ));
    }
    Ok(out)
}

/// Relative L2 mass of `u` outside the ball of radius `radius` around the origin (periodic distance).
fn mass_outside(u: &Field, radius: f64) -> f64 {
    let grid = *u.grid();
    let l = grid.box_length();
    let (mut outside, mut total) = (0.0, 0.0);
    for (i, v) in u.values().iter().enumerate() {
        let p = grid.point(i);
        let r2: f64 = p[..grid.dim()]
            .iter()
            .map(|&x| {
                let y = x - l * (x / l).round();
                y * y
            })
            .sum();
        let m = v.norm_sqr();
        total += m;
        if r2 > radius * radius {
            outside += m;
        }
    }
    (outside / total).sqrt()
}

/// Klein–Gordon (`m > 0`) Neumann solves stay inside the light cone of the data.
pub(crate) fn klein_gordon_leakage(_config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (d, n, l) in [(1usize, 512usize, 40.0f64), (2, 128, 32.0)] {
        let grid = TorusGrid::new(d, n, l)?;
        let bump = BumpSet::single(d, BumpShape::Gaussian, 0.5);
        let g = bump.sample(&grid);
        let t = l / 4.0;
        let cone = bump.negligible_radius() + t;
        let mut worst: f64 = 0.0;
        for s in [0.3, 0.7] {
            let u = solve_bessel(None, Some(&g), order(s)?, t, 2.0)?.field;
            worst = worst.max(mass_outside(&u, cone));
        }
        out.push(CheckReport::new(
            format!("klein_gordon_leakage_d{d}"),
            json!({"d": d, "n": n, "box": l, "t": t, "m": 2.0, "sigma": [0.3, 0.7], "cone_radius": cone}),
            worst,
            1e-6,
        ));
    }
    Ok(out)
}

#[derive(Clone, Copy)]
enum Stencil {
    Three,
    Five,
}

impl Stencil {
    /// Offsets and weights for the first and second derivative.
    fn weights(self) -> (&'static [(f64, f64)], &'static [(f64, f64)]) {
        match self {
            Stencil::Three => (&[(-1.0, -0.5), (1.0, 0.5)], &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)]),
            Stencil::Five => (
                &[(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)],
                &[(-2.0, -1.0 / 12.0), (-1.0, 16.0 / 12.0), (0.0, -30.0 / 12.0), (1.0, 16.0 / 12.0), (2.0, -1.0 / 12.0)],
            ),
        }
    }
}

/// `|u_tt + ((1-2 sigma)/t) u_t - Delta u| / (|u_tt| + |((1-2 sigma)/t) u_t| + |Delta u|)` in L2,
/// with time differences of step `h` and the spectral Laplacian.
fn field_residual(solve: impl Fn(f64) -> Result<Field>, sigma: f64, t: f64, h: f64, stencil: Stencil) -> Result<f64> {
    let (w1, w2) = stencil.weights();
    let u = solve(t)?;
    let grid = *u.grid();
    let mut ut = Field::zeros(grid);
    let mut utt = Field::zeros(grid);
    for &(o, w) in w2 {
        let v = if o == 0.0 { u.clone() } else { solve(t + o * h)? };
        utt = utt.axpy(Complex64::new(w / (h * h), 0.0), &v)?;
        if let Some(&(_, w)) = w1.iter().find(|p| p.0 == o) {
            ut = ut.axpy(Complex64::new(w / h, 0.0), &v)?;
        }
    }
    let lap = idft(&dft(&u).map_indexed(|i, c| -grid.xi_squared(i) * c));
    let damp = ut.scaled(Complex64::new((1.0 - 2.0 * sigma) / t, 0.0));
    let res = utt.axpy(Complex64::new(1.0, 0.0), &damp)?.sub(&lap)?;
    Ok(res.norm() / (utt.norm() + damp.norm() + lap.norm()))
}

/// Pointwise residual of a kernel solution with central differences of step `h` in `t` and `x`.
fn kernel_residual(g: &dyn SpatialFunction, spec: &KernelSpec, x: &[f64], t: f64, h: f64, quad: &KernelQuadrature) -> Result<f64> {
    let u = |y: Vec<f64>, tt: f64| kernel_solve(g, &PointQuery::new(y, tt)?, spec, quad);
    let c = u(x.to_vec(), t)?;
    let (tp, tm) = (u(x.to_vec(), t + h)?, u(x.to_vec(), t - h)?);
    let utt = (tp - 2.0 * c + tm) / (h * h);
    let damp = (1.0 - 2.0 * spec.sigma.value()) / t * (tp - tm) / (2.0 * h);
    let mut lap = 0.0;
    for a in 0..x.len() {
        let mut p = x.to_vec();
        p[a] += h;
        let mut m = x.to_vec();
        m[a] -= h;
        lap += (u(p, t)? - 2.0 * c + u(m, t)?) / (h * h);
    }
    Ok((utt + damp - lap).abs() / (utt.abs() + damp.abs() + lap.abs()))
}

/// Residual of the degenerate wave equation for each backend that can be evaluated at `t +- h`.
pub fn run_pde_residual(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let grid = check_grid(1)?;
    let f = band_passed(&grid, config.seed, 11)?;
    let sub = Subordinator::new(crate::subordination::SubordinationOptions {
        quad: config.quad,
        ..Default::default()
    })?;

    let half = order(0.5)?;
    let r = field_residual(|t| Ok(solve_bessel(Some(&f), None, half, t, 0.0)?.field), 0.5, 1.0, 1e-3, Stencil::Five)?;
    out.push(CheckReport::new(
        "pde_residual_half_order_bessel",
        json!({"d": 1, "sigma": 0.5, "t": 1.0, "h": 1e-3, "stencil": 5}),
        r,
        1e-8,
    ));

    let s = order(0.3)?;
    type Solver<'a> = Box<dyn Fn(f64) -> Result<Field> + 'a>;
    let backends: [(&str, Solver); 2] = [
        ("bessel", Box::new(|t| Ok(solve_bessel(Some(&f), None, s, t, 0.0)?.field))),
        ("subordination", Box::new(|t| Ok(sub.solve_dirichlet_real(&f, s, t, 0.0)?.field))),
    ];
    for (name, solve) in backends {
        let r1 = field_residual(&solve, 0.3, 1.0, 2e-2, Stencil::Three)?;
        let r2 = field_residual(&solve, 0.3, 1.0, 1e-2, Stencil::Three)?;
        let observed = (r1 / r2).log2();
        out.push(CheckReport::new(
            format!("pde_residual_order_{name}"),
            json!({"d": 1, "sigma": 0.3, "t": 1.0, "h": [2e-2, 1e-2], "residuals": [r1, r2], "observed_order": observed}),
            (observed - 2.0).abs(),
            0.3,
        ));
    }

    let spec = KernelSpec::new(2, order(0.6)?)?;
    let g = BumpSet::single(2, BumpShape::Gaussian, 0.6);
    let mut worst: f64 = 0.0;
    for x in [[0.0, 0.0], [0.3, -0.2], [0.8, 0.5]] {
        worst = worst.max(kernel_residual(&g, &spec, &x, 0.7, 1e-2, &config.kernel_quad)?);
    }
    out.push(CheckReport::new(
        "pde_residual_kernel_d2",
        json!({"d": 2, "sigma": 0.6, "t": 0.7, "h": 1e-2}),
        worst,
        1e-2,
    ));
    Ok(out)
}
