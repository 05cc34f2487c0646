//! Product quadrature on the unit sphere `S^(d-1)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::quadrature::gauss_jacobi;

/// Points and weights on `S^(d-1)`; the weights sum to the surface area.
#[derive(Debug, Clone)]
pub struct SphereRule {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl SphereRule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.points.chunks_exact(self.dim).zip(self.weights.iter().copied())
    }

    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Builds the rule with `n` trapezoid nodes per circle.
    ///
    /// `S^0 = {-1, 1}`; `S^1` uses the midpoint trapezoid rule; for `d >= 3`
    /// the last coordinate `z` is integrated with Gauss–Jacobi nodes for the
    /// weight `(1-z^2)^((d-3)/2)` and the slices are scaled copies of `S^(d-2)`.
    fn build(dim: usize, n: usize) -> Result<Self> {
        match dim {
            1 => Ok(Self {
                dim,
                points: vec![-1.0, 1.0],
                weights: vec![1.0, 1.0],
            }),
            2 => {
                let mut points = Vec::with_capacity(2 * n);
                for k in 0..n {
                    let th = 2.0 * PI * (k as f64 + 0.5) / n as f64;
                    points.extend([th.cos(), th.sin()]);
                }
                Ok(Self {
                    dim,
                    points,
                    weights: vec![2.0 * PI / n as f64; n],
                })
            }
            _ => {
                let lower = Self::build(dim - 1, n)?;
                let a = (dim as f64 - 3.0) / 2.0;
                let zr = gauss_jacobi((n / 2).max(2), a, a)?;
                let mut points = Vec::with_capacity(dim * zr.len() * lower.len());
                let mut weights = Vec::with_capacity(zr.len() * lower.len());
                for (&z, &wz) in zr.nodes.iter().zip(&zr.weights) {
                    let r = (1.0 - z * z).sqrt();
                    for (p, wp) in lower.iter() {
                        points.extend(p.iter().map(|c| r * c));
                        points.push(z);
                        weights.push(wz * wp);
                    }
                }
                Ok(Self { dim, points, weights })
            }
        }
    }
}

/// Cached sphere rule for dimension `dim` (1..=5) and `n` nodes per circle.
pub fn sphere_rule(dim: usize, n: usize) -> Result<Arc<SphereRule>> {
    if !(1..=5).contains(&dim) {
        return Err(Error::invalid("d", format!("sphere rules exist for d in 1..=5, got {dim}")));
    }
    if n < 4 || n % 2 != 0 {
        return Err(Error::invalid("angular", format!("need an even node count >= 4, got {n}")));
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<SphereRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&(dim, n)) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(SphereRule::build(dim, n)?);
    cache.lock().unwrap().insert((dim, n), rule.clone());
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area(d: usize) -> f64 {
        // 2, 2 pi, 4 pi, 2 pi^2, 8 pi^2 / 3
        [2.0, 2.0 * PI, 4.0 * PI, 2.0 * PI * PI, 8.0 * PI * PI / 3.0][d - 1]
    }

    #[test]
    fn areas() {
        for d in 1..=5 {
            let r = sphere_rule(d, 8).unwrap();
            assert!((r.area() - area(d)).abs() < 1e-13 * area(d), "d={d}");
        }
    }

    #[test]
    fn points_are_on_the_sphere_and_symmetric() {
        for d in 1..=5 {
            let r = sphere_rule(d, 8).unwrap();
            let mut first = vec![0.0; d];
            for (p, w) in r.iter() {
                assert!((p.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-14);
                for (f, c) in first.iter_mut().zip(p) {
                    *f += w * c;
                }
            }
            assert!(first.iter().all(|m| m.abs() < 1e-13), "d={d}");
        }
    }

    #[test]
    fn second_and_fourth_moments() {
        // int x_1^2 dS = |S|/d, int x_1^4 dS = 3|S|/(d(d+2))
        for d in 2..=5 {
            let r = sphere_rule(d, 12).unwrap();
            let m2: f64 = r.iter().map(|(p, w)| w * p[0] * p[0]).sum();
            let m4: f64 = r.iter().map(|(p, w)| w * p[d - 1].powi(4)).sum();
            assert!((m2 - area(d) / d as f64).abs() < 1e-13);
            assert!((m4 - 3.0 * area(d) / (d * (d + 2)) as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(sphere_rule(6, 8).is_err());
        assert!(sphere_rule(3, 7).is_err());
        assert!(sphere_rule(3, 2).is_err());
    }
}
