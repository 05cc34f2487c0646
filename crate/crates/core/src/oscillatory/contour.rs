use num_complex::Complex64;

use super::{OscillatoryValue, PathPiece, QuadratureSpec};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Marching step used to locate the tails.
const MARCH_STEP: f64 = 0.25;
/// Hard limit on `|tau|`; beyond it something is wrong with the parameters.
const TAU_LIMIT: f64 = 200.0;

/// A parametrized path `tau -> (log integrand, dz/dtau)` over a set of pieces.
trait Path {
    /// `log` of the integrand (without the Jacobian) at `tau`.
    fn exponent(&self, tau: f64) -> Complex64;
    fn jacobian(&self, tau: f64) -> Complex64;

    fn log_magnitude(&self, tau: f64) -> f64 {
        self.exponent(tau).re + self.jacobian(tau).norm().ln()
    }

    fn integrand(&self, tau: f64) -> Complex64 {
        self.exponent(tau).exp() * self.jacobian(tau)
    }
}

/// `s = A exp(tau + i phi(tau))`, `phi = -theta0 tanh(tau/theta0)`; the factor `e^(-2iA)` is applied afterwards.
struct SaddlePath {
    mu: f64,
    a: f64,
    log_a: f64,
    theta0: f64,
}

impl SaddlePath {
    fn z(&self, tau: f64) -> Complex64 {
        Complex64::new(tau, -self.theta0 * (tau / self.theta0).tanh())
    }
}

impl Path for SaddlePath {
    fn exponent(&self, tau: f64) -> Complex64 {
        let z = self.z(tau);
        let sh = (0.5 * z).sinh();
        // 2A cosh z = 2A + 4A sinh^2(z/2), the constant split off to keep the phase small near the saddle
        self.mu * (self.log_a + z) - Complex64::new(0.0, 4.0 * self.a) * sh * sh
    }

    fn jacobian(&self, tau: f64) -> Complex64 {
        let c = (tau / self.theta0).cosh();
        Complex64::new(1.0, -1.0 / (c * c))
    }
}

/// `A = 0`: `s = exp(u - i theta0)` with `u = tau - e^(-tau)`, so the `s -> 0` end decays double-exponentially.
struct RayPath {
    mu: f64,
    theta0: f64,
}

impl Path for RayPath {
    fn exponent(&self, tau: f64) -> Complex64 {
        let u = tau - (-tau).exp();
        let z = Complex64::new(u, -self.theta0);
        self.mu * z - Complex64::i() * z.exp()
    }

    fn jacobian(&self, tau: f64) -> Complex64 {
        Complex64::new(1.0 + (-tau).exp(), 0.0)
    }
}

/// Walks from `start` in direction `dir` until the integrand is negligible and decaying.
fn march(path: &impl Path, start: f64, dir: f64, peak: &mut f64, cutoff: f64) -> Result<f64> {
    let mut tau = start;
    let mut prev = path.log_magnitude(tau);
    *peak = peak.max(prev);
    loop {
        tau += dir * MARCH_STEP;
        if tau.abs() > TAU_LIMIT {
            return Err(Error::Convergence {
                what: "contour tail truncation",
                estimate: tau.abs(),
                tolerance: TAU_LIMIT,
            });
        }
        let cur = path.log_magnitude(tau);
        if !cur.is_nan() {
            *peak = peak.max(cur);
        }
        let negligible = cur < *peak - cutoff || cur == f64::NEG_INFINITY;
        if negligible && cur <= prev {
            return Ok(tau);
        }
        prev = cur;
    }
}

/// Composite Gauss–Legendre over the pieces with `panels[i] * 2^level` panels each.
fn sum_pieces(path: &impl Path, pieces: &[(f64, f64, usize)], order: usize, level: u32) -> Complex64 {
    let rule = gauss_legendre(order);
    let mut total = Complex64::new(0.0, 0.0);
    for &(a, b, base) in pieces {
        let count = base << level;
        let h = (b - a) / count as f64;
        for p in 0..count {
            let lo = a + p as f64 * h;
            for (x, w) in rule.mapped(lo, lo + h) {
                let v = path.integrand(x);
                if v.re.is_finite() && v.im.is_finite() {
                    total += w * v;
                }
            }
        }
    }
    total
}

fn refine(path: &impl Path, pieces: &[(f64, f64, usize)], spec: &QuadratureSpec) -> (Complex64, f64, usize) {
    let mut prev = sum_pieces(path, pieces, spec.gl_order, 0);
    let mut err = f64::INFINITY;
    let mut level = 0;
    for l in 1..=spec.max_refinements as u32 {
        let cur = sum_pieces(path, pieces, spec.gl_order, l);
        err = (cur - prev).norm();
        prev = cur;
        level = l;
        if err <= spec.tolerance * cur.norm().max(1.0) {
            break;
        }
    }
    let panels = pieces.iter().map(|p| p.2 << level).sum();
    (prev, err, panels)
}

fn panel_count(len: f64, width: f64, min: usize) -> usize {
    ((len / width).ceil() as usize).max(min)
}

/// `int_0^inf exp(-i(s + A^2/s)) s^(mu-1) ds` for `A >= 0`.
///
/// Requires `|mu| < 1`; at `A = 0` the integral only converges for `mu > 0`
/// and equals `exp(-i pi mu / 2) Gamma(mu)`.
pub fn phi_integral(mu: f64, a: f64, spec: &QuadratureSpec) -> Result<OscillatoryValue> {
    spec.validate()?;
    if !(mu > -1.0 && mu < 1.0) {
        return Err(Error::invalid("mu", format!("exponent must lie in (-1, 1), got {mu}")));
    }
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::invalid("A", format!("must be finite and >= 0, got {a}")));
    }
    let theta0 = spec.theta0();
    let cutoff = spec.tail_cutoff;

    if a == 0.0 {
        if mu <= 0.0 {
            return Err(Error::invalid("mu", "the integral diverges at s = 0 when A = 0 and mu <= 0"));
        }
        let path = RayPath { mu, theta0 };
        let mut peak = f64::NEG_INFINITY;
        let left = march(&path, 0.0, -1.0, &mut peak, cutoff)?;
        let right = march(&path, 0.0, 1.0, &mut peak, cutoff)?;
        let pieces = [(left, right, panel_count(right - left, 1.0, spec.panels))];
        let (value, err, panels) = refine(&path, &pieces, spec);
        return Ok(OscillatoryValue {
            value,
            abs_error_estimate: err,
            path: vec![PathPiece::Ray {
                angle: -theta0,
                from: left,
                to: right,
            }],
            panels,
        });
    }

    let path = SaddlePath {
        mu,
        a,
        log_a: a.ln(),
        theta0,
    };
    let w = (spec.window_factor / a.sqrt()).min(2.0);
    // panels of width ~ 2/sqrt(A) resolve the Gaussian profile exp(-2 A tau^2) at the saddle
    let window_width = (2.0 / a.sqrt()).min(1.0);
    let mut peak = path.log_magnitude(0.0);
    let left = march(&path, -w, -1.0, &mut peak, cutoff)?;
    let right = march(&path, w, 1.0, &mut peak, cutoff)?;
    let pieces = [
        (left, -w, panel_count(-w - left, 1.0, spec.panels)),
        (-w, w, panel_count(2.0 * w, window_width, spec.panels)),
        (w, right, panel_count(right - w, 1.0, spec.panels)),
    ];
    let (sum, err, panels) = refine(&path, &pieces, spec);
    let phase = Complex64::from_polar(1.0, -2.0 * a);
    Ok(OscillatoryValue {
        value: sum * phase,
        abs_error_estimate: err,
        path: vec![
            PathPiece::RayNearZero { from: left, to: -w },
            PathPiece::StationaryWindow { from: -w, to: w },
            PathPiece::RayNearInfinity { from: w, to: right },
        ],
        panels,
    })
}
