//! Browser bindings: the symbol `I_sigma(lambda, t)`, kernel profiles and a 1D spectral solve.
//!
//! Every export returns a flat `Float64Array`; row layouts are given per function.

use wasm_bindgen::prelude::*;

use fracwave_core::bessel::solve_bessel;
use fracwave_core::kernel::{kernel_solve, spherical_mean_solve, KernelQuadrature, KernelSpec, PointQuery};
use fracwave_core::oscillatory::{symbol_i, QuadratureSpec};
use fracwave_core::spectral::{BumpSet, BumpShape, SpatialFunction, TorusGrid};
use fracwave_core::FractionalOrder;

fn js_err(e: fracwave_core::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn samples(from: f64, to: f64, count: usize) -> Result<Vec<f64>, JsValue> {
    if count < 2 || !(from < to) {
        return Err(JsValue::from_str("need count >= 2 and from < to"));
    }
    Ok((0..count).map(|k| from + (to - from) * k as f64 / (count - 1) as f64).collect())
}

/// Rows `(lambda, re, im)` of `I_sigma(lambda, t)` for `lambda` in `[0, lambda_max]`.
#[wasm_bindgen]
pub fn symbol_curve(sigma: f64, t: f64, lambda_max: f64, count: usize) -> Result<Vec<f64>, JsValue> {
    let sigma = FractionalOrder::new(sigma).map_err(js_err)?;
    let quad = QuadratureSpec::default();
    let mut out = Vec::with_capacity(3 * count);
    for l in samples(0.0, lambda_max, count)? {
        let v = symbol_i(sigma, l, t, &quad).map_err(js_err)?.value;
        out.extend([l, v.re, v.im]);
    }
    Ok(out)
}

/// Rows `(x, u, mean)`: the kernel solution with Neumann datum a Ricker bump of
/// the given width, and the spherical mean it tends to, along the first axis.
#[wasm_bindgen]
pub fn kernel_profile(d: usize, sigma: f64, t: f64, width: f64, half_span: f64, count: usize) -> Result<Vec<f64>, JsValue> {
    let spec = KernelSpec::new(d, FractionalOrder::new(sigma).map_err(js_err)?).map_err(js_err)?;
    let g = BumpSet::single(d, BumpShape::Ricker, width);
    let quad = KernelQuadrature { radial: 16, angular: 16 };
    let mut out = Vec::with_capacity(3 * count);
    for x in samples(-half_span, half_span, count)? {
        let mut p = vec![0.0; d];
        p[0] = x;
        let q = PointQuery::new(p, t).map_err(js_err)?;
        let u = kernel_solve(&g, &q, &spec, &quad).map_err(js_err)?;
        let mean = if d >= 2 {
            spherical_mean_solve(&g, &q, d, &quad).map_err(js_err)?
        } else {
            f64::NAN
        };
        out.extend([x, u, mean]);
    }
    Ok(out)
}

/// Rows `(x, u)` of the 1D periodic solution with Dirichlet datum a Gaussian and
/// Neumann datum a Ricker bump, both of the given width.
#[wasm_bindgen]
pub fn bessel_solution_1d(sigma: f64, t: f64, n: usize, box_length: f64, width: f64) -> Result<Vec<f64>, JsValue> {
    let grid = TorusGrid::new(1, n, box_length).map_err(js_err)?;
    let f = BumpSet::single(1, BumpShape::Gaussian, width).sample(&grid);
    let g = BumpSet::single(1, BumpShape::Ricker, width).sample(&grid);
    let sigma = FractionalOrder::new(sigma).map_err(js_err)?;
    let u = solve_bessel(Some(&f), Some(&g), sigma, t, 0.0).map_err(js_err)?.field;
    Ok(u.values()
        .iter()
        .enumerate()
        .flat_map(|(j, v)| [grid.coordinate(j), v.re])
        .collect())
}
