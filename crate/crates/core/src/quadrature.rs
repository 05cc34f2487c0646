//! Gauss–Legendre and Gauss–Jacobi rules.
//!
//! Nodes come from the Golub–Welsch eigenvalue problem and are polished by
//! Newton steps on the Jacobi polynomial. Weights are the Christoffel numbers
//! `1 / sum_k p_k(x)^2` over the orthonormal polynomials, which keeps full
//! relative precision for small weights and for nodes crowding an endpoint.

use nalgebra::{DMatrix, SymmetricEigen};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// Nodes and weights of an interpolatory rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Nodes and weights affinely mapped from `[-1, 1]` to `[a, b]` (weight function ignored).
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// `P_n^(a,b)(z)`, `P_(n-1)^(a,b)(z)` and `d/dz P_n^(a,b)(z)` by the three-term recurrence.
fn jacobi_eval(n: usize, alpha: f64, beta: f64, z: f64) -> (f64, f64, f64) {
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    let mut p = 0.5 * (alpha - beta + (ab + 2.0) * z);
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    for j in 2..=n {
        let j = j as f64;
        let c = 2.0 * j + ab;
        let a1 = 2.0 * j * (j + ab) * (c - 2.0);
        let b1 = (c - 1.0) * (alpha * alpha - beta * beta + c * (c - 2.0) * z);
        let c1 = 2.0 * (j - 1.0 + alpha) * (j - 1.0 + beta) * c;
        let next = (b1 * p - c1 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let c = 2.0 * nf + ab;
    let dp = (nf * (alpha - beta - c * z) * p + 2.0 * (nf + alpha) * (nf + beta) * p_prev) / (c * (1.0 - z * z));
    (p, p_prev, dp)
}

/// Diagonal `a_k` (k < n) and off-diagonal `b_k` (1 <= k < n, `b[0]` unused) of the Jacobi matrix.
fn jacobi_matrix(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        a[k] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (c * (c + 2.0))
        };
        if k >= 1 {
            let b2 = if k == 1 {
                // the general formula is 0/0 when alpha + beta = -1
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (c * c * (c + 1.0) * (c - 1.0))
            };
            b[k] = b2.sqrt();
        }
    }
    (a, b)
}

fn golub_welsch_nodes(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = a[k];
        if k >= 1 {
            m[(k, k - 1)] = b[k];
            m[(k - 1, k)] = b[k];
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
    nodes
}

/// `2^(a+b+1) Gamma(a+1) Gamma(b+1) / Gamma(a+b+2)`, the total mass of the weight.
fn jacobi_mass(alpha: f64, beta: f64) -> f64 {
    let ab = alpha + beta;
    ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(ab + 2.0)).exp()
}

fn build_jacobi(n: usize, alpha: f64, beta: f64) -> Rule {
    let mass = jacobi_mass(alpha, beta);
    let (a, b) = jacobi_matrix(n, alpha, beta);
    if n == 1 {
        return Rule {
            nodes: a,
            weights: vec![mass],
        };
    }
    let mut nodes = golub_welsch_nodes(&a, &b);
    let mut weights = Vec::with_capacity(n);
    for z in nodes.iter_mut() {
        for _ in 0..8 {
            let (p, _, dp) = jacobi_eval(n, alpha, beta, *z);
            let step = p / dp;
            *z -= step;
            if step.abs() <= 1e-16 * z.abs().max(1e-3) {
                break;
            }
        }
        // orthonormal recurrence b_{k+1} p_{k+1} = (z - a_k) p_k - b_k p_{k-1}, p_0 = 1
        let (mut prev, mut cur, mut sum) = (0.0, 1.0, 1.0);
        for k in 0..n - 1 {
            let next = ((*z - a[k]) * cur - if k > 0 { b[k] * prev } else { 0.0 }) / b[k + 1];
            prev = cur;
            cur = next;
            sum += cur * cur;
        }
        weights.push(mass / sum);
    }
    Rule { nodes, weights }
}

type RuleKey = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<Rule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<Rule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Jacobi rule for `int_{-1}^{1} (1-x)^alpha (1+x)^beta f(x) dx`, exact for degree `2n-1`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Arc<Rule>> {
    if n == 0 {
        return Err(Error::invalid("n", "a quadrature rule needs at least one node"));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::invalid("alpha", format!("Jacobi exponents must exceed -1, got ({alpha}, {beta})")));
    }
    let key = (n, alpha.to_bits(), beta.to_bits());
    if let Some(rule) = cache().lock().unwrap().get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(build_jacobi(n, alpha, beta));
    cache().lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    gauss_jacobi(n.max(1), 0.0, 0.0).expect("valid Legendre parameters")
}

/// Rule for `int_0^1 v^p (1-v)^q f(v) dv` with nodes in `(0, 1)`.
pub fn jacobi_unit_interval(n: usize, p: f64, q: f64) -> Result<Rule> {
    let rule = gauss_jacobi(n, q, p)?;
    let scale = 2f64.powf(-1.0 - p - q);
    Ok(Rule {
        nodes: rule.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect(),
        weights: rule.weights.iter().map(|w| w * scale).collect(),
    })
}

/// Composite Gauss–Legendre over `[a, b]` split into `panels` equal pieces.
pub fn composite_legendre(order: usize, panels: usize, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * h;
            rule.mapped(lo, lo + h).map(|(x, w)| w * f(x)).sum::<f64>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn beta_fn(a: f64, b: f64) -> f64 {
        gamma(a) * gamma(b) / gamma(a + b)
    }

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 20, 64] {
            let rule = gauss_legendre(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n={n}");
            for k in 0..(2 * n) {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let got = rule.integrate(|x| x.powi(k as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} k={k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn legendre_known_nodes() {
        let rule = gauss_legendre(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((rule.nodes[0] + x).abs() < 1e-15 && (rule.nodes[1] - x).abs() < 1e-15);
        let rule = gauss_legendre(3);
        assert!((rule.nodes[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((rule.weights[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_moments_match_beta_function() {
        // int_{-1}^1 (1-x)^a (1+x)^b (1+x)^k dx = 2^(a+b+k+1) B(a+1, b+k+1)
        for (a, b) in [(-0.5, -0.5), (-0.75, 0.5), (0.3, -0.9), (-0.999, 0.0), (1.5, 0.5), (-0.2, 1.0)] {
            for n in [1, 3, 10, 30] {
                let rule = gauss_jacobi(n, a, b).unwrap();
                for k in 0..(2 * n).min(12) {
                    let exact = 2f64.powf(a + b + k as f64 + 1.0) * beta_fn(a + 1.0, b + k as f64 + 1.0);
                    let got = rule.integrate(|x| (1.0 + x).powi(k as i32));
                    assert!((got - exact).abs() <= 1e-12 * exact, "a={a} b={b} n={n} k={k}: {got} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn chebyshev_case_has_equal_weights() {
        let n = 7;
        let rule = gauss_jacobi(n, -0.5, -0.5).unwrap();
        for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let exact = -((2 * i + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            assert!((x - exact).abs() < 1e-14);
            assert!((w - std::f64::consts::PI / n as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn unit_interval_rule() {
        let rule = jacobi_unit_interval(12, 0.5, -0.7).unwrap();
        assert!(rule.nodes.iter().all(|&v| v > 0.0 && v < 1.0));
        for k in 0..10 {
            let exact = beta_fn(1.5 + k as f64, 0.3);
            let got = rule.integrate(|v| v.powi(k));
            assert!((got - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn composite_rule_on_smooth_integrand() {
        let got = composite_legendre(10, 4, 0.0, std::f64::consts::PI, f64::sin);
        assert!((got - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
        assert!(gauss_jacobi(3, -1.0, 0.0).is_err());
    }
}
