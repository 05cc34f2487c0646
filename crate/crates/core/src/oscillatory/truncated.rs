use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::order::FractionalOrder;
use crate::quadrature::gauss_legendre;

const ORDER: usize = 20;
const CHUNK: usize = 4096;

/// Panel boundaries in `u = ln s` over `[ua, ub]` with at most about `pi` radians of phase per panel.
fn panel_edges(ua: f64, ub: f64, a2: f64) -> Vec<f64> {
    let mut edges = vec![ua];
    let mut u = ua;
    while u < ub {
        let rate = (u + 0.5).exp().max(a2 * (-u).exp());
        let step = (PI / rate).min(0.5);
        u = (u + step).min(ub);
        edges.push(u);
    }
    edges
}

/// `int e^(-i(e^u + a2 e^-u)) e^(p u) du` over consecutive panels, summed in a fixed order.
fn integrate_panels(edges: &[f64], a2: f64, p: f64) -> Complex64 {
    let rule = gauss_legendre(ORDER);
    let panels = edges.len() - 1;
    let chunks: Vec<&[f64]> = (0..panels)
        .step_by(CHUNK)
        .map(|c| &edges[c..(c + CHUNK).min(panels) + 1])
        .collect();
    let partial = crate::par::map(&chunks, |e| {
        let mut acc = Complex64::new(0.0, 0.0);
        for w in e.windows(2) {
            for (u, wt) in rule.mapped(w[0], w[1]) {
                let phase = u.exp() + a2 * (-u).exp();
                acc += wt * (p * u).exp() * Complex64::from_polar(1.0, -phase);
            }
        }
        acc
    });
    partial.into_iter().sum()
}

fn check(lambda: f64, t: f64, k: u32) -> Result<()> {
    if !(lambda >= 0.0 && t > 0.0) {
        return Err(Error::invalid("lambda", "need lambda >= 0 and t > 0"));
    }
    if !(1..=3).contains(&k) {
        return Err(Error::invalid("k", format!("k must be 1, 2 or 3, got {k}")));
    }
    Ok(())
}

/// `int_eps^R e^(-is - i t^2 lambda / 4s) s^(sigma-k) ds` by real-axis Gauss–Legendre in `ln s`.
pub fn truncated_integral(sigma: FractionalOrder, lambda: f64, t: f64, eps: f64, r: f64, k: u32) -> Result<Complex64> {
    Ok(truncated_integral_grid(sigma, lambda, t, &[eps], &[r], k)?[0][0])
}

/// All combinations `[i][j]` for `eps_list[i]`, `r_list[j]`, sharing the quadrature between breakpoints.
pub fn truncated_integral_grid(
    sigma: FractionalOrder,
    lambda: f64,
    t: f64,
    eps_list: &[f64],
    r_list: &[f64],
    k: u32,
) -> Result<Vec<Vec<Complex64>>> {
    check(lambda, t, k)?;
    let max_eps = eps_list.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_r = r_list.iter().copied().fold(f64::INFINITY, f64::min);
    if eps_list.is_empty() || r_list.is_empty() || !(eps_list.iter().all(|&e| e > 0.0) && max_eps < min_r) {
        return Err(Error::invalid("eps", "need 0 < eps < R for every pair"));
    }
    let a2 = 0.25 * t * t * lambda;
    let p = sigma.value() - k as f64 + 1.0;
    let mut breaks: Vec<f64> = eps_list.iter().chain(r_list).map(|v| v.ln()).collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    // cumulative integral from the first breakpoint
    let mut cumulative = vec![Complex64::new(0.0, 0.0)];
    for w in breaks.windows(2) {
        let seg = integrate_panels(&panel_edges(w[0], w[1], a2), a2, p);
        let last = *cumulative.last().unwrap();
        cumulative.push(last + seg);
    }
    let at = |v: f64| {
        let u = v.ln();
        cumulative[breaks.iter().position(|&b| b == u).unwrap()]
    };
    Ok(eps_list
        .iter()
        .map(|&e| r_list.iter().map(|&r| at(r) - at(e)).collect())
        .collect())
}
