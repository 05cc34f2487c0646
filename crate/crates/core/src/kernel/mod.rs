//! Physical-space solutions of the Neumann problem `u(.,0) = 0`, `d_t^sigma u(.,0) = g`
//! as weighted integrals over the ball `B(x, t)`.
//!
//! All ball integrals are taken in polar form `y = x + t rho omega` with
//! `v = rho^2`, so that `int_B h(y) (t^2 - |x-y|^2)^(-beta) dy` becomes
//! `t^(d - 2 beta)/2 int_0^1 v^(d/2-1) (1-v)^(-beta) int_S h dS dv`
//! and the boundary singularity is absorbed by Gauss–Jacobi weights.
//! Every node lies strictly inside the ball.

mod sphere;

pub use sphere::{sphere_rule, SphereRule};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::order::FractionalOrder;
use crate::quadrature::jacobi_unit_interval;
use crate::special::gamma;
use crate::spectral::{unit_sphere_area, SpatialFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `0 < gamma < 1`: weight `(t^2 - |x-y|^2)^(-gamma)` on `g`.
    Low,
    /// `1 < gamma < 2`: weight `(t^2 - |x-y|^2)^(1-gamma)` on `2(sigma+1) g + (y-x).grad g`, divided by `t^2`.
    High,
    /// `gamma = 1` (d = 3, sigma = 1/2): surface integral; or `gamma = 0` (d = 1, sigma = 1/2): half the interval integral.
    Limit,
    /// d = 1 and `sigma > 1/2`: bounded weight `(t^2 - |x-y|^2)^(sigma - 1/2)`.
    Descent,
}

/// Dimension, order and the resulting kernel exponent and constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub d: usize,
    pub sigma: FractionalOrder,
    /// `d/2 - sigma`
    pub gamma: f64,
    pub regime: Regime,
    pub constant: f64,
}

impl KernelSpec {
    pub fn new(d: usize, sigma: FractionalOrder) -> Result<Self> {
        if !(1..=5).contains(&d) {
            return Err(Error::invalid("d", format!("kernels are available for d in 1..=5, got {d}")));
        }
        let s = sigma.value();
        let g = d as f64 / 2.0 - s;
        let denom = PI.powf(d as f64 / 2.0) * sigma.sin_pi() * gamma(1.0 - s);
        let (regime, constant) = if d == 1 && s > 0.5 {
            (Regime::Descent, s * gamma(s) / (PI.sqrt() * gamma(s + 0.5)))
        } else if g == 0.0 {
            (Regime::Limit, 0.5)
        } else if g == 1.0 {
            (Regime::Limit, 1.0 / (unit_sphere_area(d)))
        } else if g > 0.0 && g < 1.0 {
            (Regime::Low, s * (g * PI).sin() * gamma(g) / denom)
        } else if g > 1.0 && g < 2.0 {
            (Regime::High, s * ((g - 1.0) * PI).sin() * gamma(g - 1.0) / (2.0 * denom))
        } else {
            return Err(Error::RegimeMismatch(format!(
                "d/2 - sigma = {g} >= 2 (d = {d}, sigma = {s}) has no kernel formula"
            )));
        };
        Ok(Self {
            d,
            sigma,
            gamma: g,
            regime,
            constant,
        })
    }

    fn expect(&self, regime: Regime, op: &str) -> Result<()> {
        if self.regime != regime {
            return Err(Error::RegimeMismatch(format!(
                "{op} needs the {regime:?} regime, but d = {} and sigma = {} give {:?} (gamma = {})",
                self.d,
                self.sigma.value(),
                self.regime,
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Evaluation point `(x, t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointQuery {
    pub x: Vec<f64>,
    pub t: f64,
}

impl PointQuery {
    pub fn new(x: Vec<f64>, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid("t", format!("time must be finite and positive, got {t}")));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("x", "query point must be finite"));
        }
        Ok(Self { x, t })
    }

    fn check(&self, d: usize, g: &dyn SpatialFunction) -> Result<()> {
        if self.x.len() != d || g.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("dimension {d}"),
                found: format!("query dimension {}, data dimension {}", self.x.len(), g.dim()),
            });
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::invalid("t", format!("time must be finite and positive, got {}", self.t)));
        }
        Ok(())
    }
}

/// Node counts: `radial` Gauss–Jacobi nodes in `v = rho^2`, `angular` trapezoid nodes per circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelQuadrature {
    pub radial: usize,
    pub angular: usize,
}

impl Default for KernelQuadrature {
    fn default() -> Self {
        Self { radial: 32, angular: 32 }
    }
}

impl KernelQuadrature {
    pub fn refined(self) -> Self {
        Self {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial == 0 {
            return Err(Error::invalid("radial", "need at least one radial node"));
        }
        sphere_rule(2, self.angular).map(|_| ())
    }
}

/// `int_{B(x,t)} h(y, y - x) (t^2 - |x-y|^2)^(-beta) dy` for `beta < 1`.
fn ball_integral(
    d: usize,
    q: &PointQuery,
    beta: f64,
    quad: &KernelQuadrature,
    h: impl Fn(&[f64], &[f64]) -> f64 + Sync,
) -> Result<f64> {
    quad.validate()?;
    let radial = jacobi_unit_interval(quad.radial, d as f64 / 2.0 - 1.0, -beta)?;
    let sphere = sphere_rule(d, quad.angular)?;
    let t = q.t;
    let nodes: Vec<(f64, f64)> = radial.nodes.iter().copied().zip(radial.weights.iter().copied()).collect();
    // shells are independent; summing them in node order keeps the result deterministic
    let shells = crate::par::map(&nodes, |&(v, wv)| {
        let r = t * v.sqrt();
        let mut y = [0.0; 5];
        let mut z = [0.0; 5];
        let mut shell = 0.0;
        for (omega, w) in sphere.iter() {
            for a in 0..d {
                z[a] = r * omega[a];
                y[a] = q.x[a] + z[a];
            }
            shell += w * h(&y[..d], &z[..d]);
        }
        wv * shell
    });
    Ok(0.5 * t.powf(d as f64 - 2.0 * beta) * shells.iter().sum::<f64>())
}

/// `int_{partial B(x,t)} g dS`.
fn sphere_integral(g: &dyn SpatialFunction, q: &PointQuery, quad: &KernelQuadrature) -> Result<f64> {
    quad.validate()?;
    let d = q.x.len();
    let sphere = sphere_rule(d, quad.angular)?;
    let mut y = vec![0.0; d];
    let mut total = 0.0;
    for (omega, w) in sphere.iter() {
        for a in 0..d {
            y[a] = q.x[a] + q.t * omega[a];
        }
        total += w * g.value(&y);
    }
    Ok(q.t.powi(d as i32 - 1) * total)
}

/// Ball potential `W_beta g(x,t) = int_{B(x,t)} g(y) (t^2 - |x-y|^2)^(-beta) dy`, `beta < 1`.
pub fn ball_potential(g: &dyn SpatialFunction, q: &PointQuery, beta: f64, quad: &KernelQuadrature) -> Result<f64> {
    if !(beta < 1.0 && beta > -1.0) {
        return Err(Error::invalid("beta", format!("exponent must lie in (-1, 1), got {beta}")));
    }
    q.check(g.dim(), g)?;
    ball_integral(g.dim(), q, beta, quad, |y, _| g.value(y))
}

/// `c int_{B(x,t)} g(y) (t^2 - |x-y|^2)^(-gamma) dy` for `0 < gamma < 1`.
pub fn kernel_low_solve(
    g: &dyn SpatialFunction,
    q: &PointQuery,
    spec: &KernelSpec,
    quad: &KernelQuadrature,
) -> Result<f64> {
    spec.expect(Regime::Low, "kernel_low_solve")?;
    q.check(spec.d, g)?;
    Ok(spec.constant * ball_integral(spec.d, q, spec.gamma, quad, |y, _| g.value(y))?)
}

/// `(c/t^2) int_{B(x,t)} (2(sigma+1) g(y) + (y-x).grad g(y)) (t^2 - |x-y|^2)^(1-gamma) dy` for `1 < gamma < 2`.
pub fn kernel_high_solve(
    g: &dyn SpatialFunction,
    q: &PointQuery,
    spec: &KernelSpec,
    quad: &KernelQuadrature,
) -> Result<f64> {
    spec.expect(Regime::High, "kernel_high_solve")?;
    q.check(spec.d, g)?;
    let d = spec.d;
    let c = 2.0 * (spec.sigma.value() + 1.0);
    let integral = ball_integral(d, q, spec.gamma - 1.0, quad, |y, z| {
        let mut grad = [0.0; 5];
        g.gradient(y, &mut grad[..d]);
        c * g.value(y) + z.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>()
    })?;
    Ok(spec.constant * integral / (q.t * q.t))
}

/// Limit `(1/(c_d t)) int_{partial B(x,t)} g dS` with `c_d = |S^(d-1)|` (2 pi, 4 pi, 2 pi^2).
pub fn spherical_mean_solve(g: &dyn SpatialFunction, q: &PointQuery, d: usize, quad: &KernelQuadrature) -> Result<f64> {
    if !(2..=4).contains(&d) {
        return Err(Error::invalid("d", format!("the spherical-mean limit exists for d in 2..=4, got {d}")));
    }
    q.check(d, g)?;
    Ok(sphere_integral(g, q, quad)? / (unit_sphere_area(d) * q.t))
}

/// `(sigma Gamma(sigma)/(sqrt(pi) Gamma(sigma + 1/2))) int_{x-t}^{x+t} g(y) (t^2 - |x-y|^2)^(sigma - 1/2) dy`, d = 1, `sigma > 1/2`.
pub fn descent1d_solve(g: &dyn SpatialFunction, q: &PointQuery, sigma: FractionalOrder, quad: &KernelQuadrature) -> Result<f64> {
    let spec = KernelSpec::new(1, sigma)?;
    spec.expect(Regime::Descent, "descent1d_solve")?;
    q.check(1, g)?;
    Ok(spec.constant * ball_integral(1, q, spec.gamma, quad, |y, _| g.value(y))?)
}

/// Classical planar wave solution `(t^2/2) (avg over B(x,t)) g(y) / sqrt(t^2 - |x-y|^2)`.
pub fn classical_d2_solve(g: &dyn SpatialFunction, q: &PointQuery, quad: &KernelQuadrature) -> Result<f64> {
    q.check(2, g)?;
    let avg = ball_integral(2, q, 0.5, quad, |y, _| g.value(y))? / (PI * q.t * q.t);
    Ok(0.5 * q.t * q.t * avg)
}

/// Classical spatial wave solution `t (avg over partial B(x,t)) g`.
pub fn classical_d3_solve(g: &dyn SpatialFunction, q: &PointQuery, quad: &KernelQuadrature) -> Result<f64> {
    q.check(3, g)?;
    Ok(q.t * sphere_integral(g, q, quad)? / (4.0 * PI * q.t * q.t))
}

/// Dispatches on the regime of `spec`.
pub fn kernel_solve(g: &dyn SpatialFunction, q: &PointQuery, spec: &KernelSpec, quad: &KernelQuadrature) -> Result<f64> {
    match spec.regime {
        Regime::Low => kernel_low_solve(g, q, spec, quad),
        Regime::High => kernel_high_solve(g, q, spec, quad),
        Regime::Descent => descent1d_solve(g, q, spec.sigma, quad),
        Regime::Limit if spec.d == 1 => {
            q.check(1, g)?;
            Ok(spec.constant * ball_integral(1, q, 0.0, quad, |y, _| g.value(y))?)
        }
        Regime::Limit => spherical_mean_solve(g, q, spec.d, quad),
    }
}

/// [`kernel_solve`] over many queries, in parallel.
pub fn kernel_solve_many(
    g: &dyn SpatialFunction,
    queries: &[PointQuery],
    spec: &KernelSpec,
    quad: &KernelQuadrature,
) -> Result<Vec<f64>> {
    crate::par::map(queries, |q| kernel_solve(g, q, spec, quad)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{BumpSet, BumpShape, CompactBump, Constant};

    fn order(s: f64) -> FractionalOrder {
        FractionalOrder::new(s).unwrap()
    }

    /// `|y|^2`
    struct Quadratic(usize);

    impl SpatialFunction for Quadratic {
        fn dim(&self) -> usize {
            self.0
        }
        fn value(&self, x: &[f64]) -> f64 {
            x.iter().map(|v| v * v).sum()
        }
        fn gradient(&self, x: &[f64], out: &mut [f64]) {
            for (o, v) in out.iter_mut().zip(x) {
                *o = 2.0 * v;
            }
        }
    }

    /// `g = |y|^2` gives `u = t^(2 sigma) (|x|^2 + d t^2 / (2 (sigma + 1)))`, `g = 1` gives `t^(2 sigma)`.
    fn quadratic_solution(d: usize, s: f64, x: &[f64], t: f64) -> f64 {
        let x2: f64 = x.iter().map(|v| v * v).sum();
        t.powf(2.0 * s) * (x2 + d as f64 * t * t / (2.0 * (s + 1.0)))
    }

    fn cases() -> Vec<(usize, f64)> {
        vec![
            (1, 0.3),
            (1, 0.5),
            (1, 0.7),
            (2, 0.1),
            (2, 0.6),
            (3, 0.25),
            (3, 0.5),
            (3, 0.75),
            (4, 0.8),
            (5, 0.7),
        ]
    }

    #[test]
    fn regimes_and_constants() {
        assert_eq!(KernelSpec::new(1, order(0.3)).unwrap().regime, Regime::Low);
        assert_eq!(KernelSpec::new(1, order(0.7)).unwrap().regime, Regime::Descent);
        assert_eq!(KernelSpec::new(3, order(0.25)).unwrap().regime, Regime::High);
        assert_eq!(KernelSpec::new(3, order(0.5)).unwrap().regime, Regime::Limit);
        assert_eq!(KernelSpec::new(4, order(0.2)).unwrap().regime, Regime::High);
        assert!(KernelSpec::new(5, order(0.4)).is_err());
        assert!(KernelSpec::new(6, order(0.9)).is_err());
        // d = 2, sigma = 1/2 reduces to 1/(2 pi)
        let k = KernelSpec::new(2, order(0.5)).unwrap();
        assert!((k.constant - 0.5 / PI).abs() < 1e-15);
    }

    #[test]
    fn constant_data_gives_power_of_t() {
        for (d, s) in cases() {
            let spec = KernelSpec::new(d, order(s)).unwrap();
            let g = Constant { dim: d, value: 1.0 };
            for t in [0.3, 1.0, 2.5] {
                let q = PointQuery::new(vec![0.2; d], t).unwrap();
                let u = kernel_solve(&g, &q, &spec, &KernelQuadrature::default()).unwrap();
                assert!((u - t.powf(2.0 * s)).abs() < 1e-12 * t.powf(2.0 * s), "d={d} s={s} t={t}: {u}");
            }
        }
    }

    #[test]
    fn quadratic_data_matches_exact_solution() {
        for (d, s) in cases() {
            let spec = KernelSpec::new(d, order(s)).unwrap();
            let x: Vec<f64> = (0..d).map(|a| 0.3 - 0.2 * a as f64).collect();
            let q = PointQuery::new(x.clone(), 0.8).unwrap();
            let u = kernel_solve(&Quadratic(d), &q, &spec, &KernelQuadrature::default()).unwrap();
            let exact = quadratic_solution(d, s, &x, 0.8);
            assert!((u - exact).abs() < 1e-12 * exact.abs(), "d={d} s={s}: {u} vs {exact}");
        }
    }

    #[test]
    fn zero_data_and_finite_propagation() {
        let quad = KernelQuadrature::default();
        for (d, s) in cases() {
            let spec = KernelSpec::new(d, order(s)).unwrap();
            let q = PointQuery::new(vec![0.0; d], 1.0).unwrap();
            let zero = Constant { dim: d, value: 0.0 };
            assert_eq!(kernel_solve(&zero, &q, &spec, &quad).unwrap(), 0.0);
            // support B(c, 0.5) with |c| = 1.5 touches the ball only at distance 1.0
            let mut center = [0.0; 3];
            center[0] = 1.5;
            let far = CompactBump {
                dim: d,
                center,
                radius: 0.5,
                amplitude: 1.0,
            };
            assert_eq!(kernel_solve(&far, &q, &spec, &quad).unwrap(), 0.0, "d={d} s={s}");
        }
    }

    #[test]
    fn classical_formulas() {
        let quad = KernelQuadrature::default();
        let q2 = PointQuery::new(vec![0.1, -0.2], 1.3).unwrap();
        assert!((classical_d2_solve(&Constant { dim: 2, value: 1.0 }, &q2, &quad).unwrap() - 1.3).abs() < 1e-13);
        let g2 = BumpSet::single(2, BumpShape::Gaussian, 0.7);
        let a = classical_d2_solve(&g2, &q2, &quad.refined()).unwrap();
        let b = kernel_low_solve(&g2, &q2, &KernelSpec::new(2, order(0.5)).unwrap(), &quad.refined()).unwrap();
        assert!((a - b).abs() < 1e-8 * b.abs());
        let q3 = PointQuery::new(vec![0.1, 0.0, 0.3], 0.9).unwrap();
        let g3 = Constant { dim: 3, value: 1.0 };
        assert!((spherical_mean_solve(&g3, &q3, 3, &quad).unwrap() - 0.9).abs() < 1e-14);
        let g3 = BumpSet::single(3, BumpShape::Gaussian, 0.7);
        let a = classical_d3_solve(&g3, &q3, &quad).unwrap();
        let b = spherical_mean_solve(&g3, &q3, 3, &quad).unwrap();
        assert!((a - b).abs() < 1e-13 * b.abs());
    }

    #[test]
    fn descent_tends_to_half_interval_integral() {
        let g = BumpSet::single(1, BumpShape::Gaussian, 0.5);
        let q = PointQuery::new(vec![0.2], 0.9).unwrap();
        // (1/2) int_{-0.7}^{1.1} exp(-2 y^2) dy, mpmath at 30 digits
        let half = 0.567337643644676403786066245179;
        let quad = KernelQuadrature::default();
        let limit = kernel_solve(&g, &q, &KernelSpec::new(1, order(0.5)).unwrap(), &quad).unwrap();
        assert!((limit - half).abs() < 1e-14, "{limit} vs {half}");
        let mut prev = f64::INFINITY;
        for s in [0.51, 0.501, 0.5001] {
            let u = descent1d_solve(&g, &q, order(s), &quad).unwrap();
            let err = (u - half).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-4);
        let below = kernel_low_solve(&g, &q, &KernelSpec::new(1, order(0.4999)).unwrap(), &quad).unwrap();
        assert!((below - half).abs() < 1e-4);
        assert!(descent1d_solve(&g, &q, order(0.4), &quad).is_err());
    }

    #[test]
    fn regime_mismatch_is_reported() {
        let g = Constant { dim: 3, value: 1.0 };
        let q = PointQuery::new(vec![0.0; 3], 1.0).unwrap();
        let quad = KernelQuadrature::default();
        let high = KernelSpec::new(3, order(0.25)).unwrap();
        assert!(matches!(kernel_low_solve(&g, &q, &high, &quad), Err(Error::RegimeMismatch(_))));
        let low = KernelSpec::new(3, order(0.75)).unwrap();
        assert!(matches!(kernel_high_solve(&g, &q, &low, &quad), Err(Error::RegimeMismatch(_))));
        assert!(kernel_low_solve(&Constant { dim: 2, value: 1.0 }, &q, &low, &quad).is_err());
        assert!(PointQuery::new(vec![0.0], 0.0).is_err());
    }

    #[test]
    fn scaling_covariance() {
        struct Scaled<'a>(&'a BumpSet, f64);
        impl SpatialFunction for Scaled<'_> {
            fn dim(&self) -> usize {
                self.0.dim
            }
            fn value(&self, x: &[f64]) -> f64 {
                let y: Vec<f64> = x.iter().map(|v| v / self.1).collect();
                self.0.value(&y)
            }
            fn gradient(&self, x: &[f64], out: &mut [f64]) {
                let y: Vec<f64> = x.iter().map(|v| v / self.1).collect();
                self.0.gradient(&y, out);
                out.iter_mut().for_each(|o| *o /= self.1);
            }
        }
        let quad = KernelQuadrature::default();
        let a = 1.7;
        for (d, s) in [(2, 0.6), (3, 0.25), (1, 0.8)] {
            let g = BumpSet::single(d, BumpShape::Gaussian, 0.6);
            let spec = KernelSpec::new(d, order(s)).unwrap();
            let x: Vec<f64> = (0..d).map(|i| 0.1 * (i + 1) as f64).collect();
            let u = kernel_solve(&g, &PointQuery::new(x.clone(), 0.7).unwrap(), &spec, &quad).unwrap();
            let xs = x.iter().map(|v| a * v).collect();
            let us = kernel_solve(&Scaled(&g, a), &PointQuery::new(xs, a * 0.7).unwrap(), &spec, &quad).unwrap();
            assert!((us - a.powf(2.0 * s) * u).abs() < 1e-10 * u.abs(), "d={d}");
        }
    }

    #[test]
    fn quadrature_self_convergence() {
        for (d, s) in cases() {
            let quad = if d == 5 {
                KernelQuadrature { radial: 24, angular: 16 }
            } else {
                KernelQuadrature::default()
            };
            let g = BumpSet::single(d, BumpShape::Ricker, 0.6);
            let spec = KernelSpec::new(d, order(s)).unwrap();
            let q = PointQuery::new(vec![0.15; d], 1.0).unwrap();
            let a = kernel_solve(&g, &q, &spec, &quad).unwrap();
            let b = kernel_solve(&g, &q, &spec, &quad.refined()).unwrap();
            assert!((a - b).abs() <= 1e-6 * a.abs().max(1e-3), "d={d} s={s}: {a} vs {b}");
        }
    }
}
