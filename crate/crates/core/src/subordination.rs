//! Solution operator `U_t^sigma` as the Fourier multiplier `I_sigma(|xi|^2 + m^2, t)`,
//! and the real Dirichlet and Neumann solutions built from it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::order::FractionalOrder;
use crate::oscillatory::{QuadratureSpec, SymbolRoute};
use crate::snapshot::{check_mass, check_time, Backend, SolutionSnapshot};
use crate::spectral::{dft, idft, operator_power, Field, RadialLattice, SpectralField, TorusGrid, ZeroModeRule};

/// Options for the subordination backend.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SubordinationOptions {
    pub quad: QuadratureSpec,
    /// Contour by default, so that this backend is independent of the Bessel multipliers.
    pub route: SymbolRoute,
}

type Key = (u64, u64, u64, u64, bool);

/// Evaluates and caches symbol values keyed by the exact bits of `(sigma, lambda, t, m)`.
///
/// Missing values are computed in parallel and inserted afterwards, so the
/// results do not depend on scheduling.
#[derive(Debug, Default)]
pub struct Subordinator {
    options: SubordinationOptions,
    cache: Mutex<HashMap<Key, Complex64>>,
}

fn key(sigma: FractionalOrder, lambda: f64, t: f64, m: f64, route: SymbolRoute) -> Key {
    (
        sigma.value().to_bits(),
        lambda.to_bits(),
        t.to_bits(),
        m.to_bits(),
        route == SymbolRoute::Contour,
    )
}

/// Weights of the central 5-point first-derivative stencil at offsets `-2h, -h, h, 2h`.
const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];

/// Ratio of the stencil derivative of `t^p` (step `h = ratio * t`) to the exact `p t^(p-1)`.
fn stencil_gain(p: f64, ratio: f64) -> f64 {
    STENCIL.iter().map(|&(o, w)| w * (1.0 + o * ratio).powf(p)).sum::<f64>() / (ratio * p)
}

/// Step of the time differences relative to `t`.
pub const DTN_STEP_RATIO: f64 = 0.1;

impl Subordinator {
    pub fn new(options: SubordinationOptions) -> Result<Self> {
        options.quad.validate()?;
        Ok(Self {
            options,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn options(&self) -> &SubordinationOptions {
        &self.options
    }

    pub fn cached_values(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    /// `I_sigma(lambda, t)` for each entry of `lambdas`.
    pub fn symbol_values(&self, sigma: FractionalOrder, lambdas: &[f64], t: f64, m: f64) -> Result<Vec<Complex64>> {
        let route = self.options.route;
        let missing: Vec<f64> = {
            let cache = self.cache.lock().unwrap();
            let mut seen = std::collections::HashSet::new();
            lambdas
                .iter()
                .copied()
                .filter(|&l| !cache.contains_key(&key(sigma, l, t, m, route)) && seen.insert(l.to_bits()))
                .collect()
        };
        let computed = crate::par::map(&missing, |&l| {
            crate::oscillatory::symbol::symbol_value(sigma, l, t, route, &self.options.quad)
        });
        let mut cache = self.cache.lock().unwrap();
        for (l, v) in missing.iter().zip(computed) {
            cache.insert(key(sigma, *l, t, m, route), v?);
        }
        Ok(lambdas.iter().map(|&l| cache[&key(sigma, l, t, m, route)]).collect())
    }

    fn lattice_lambdas(grid: &TorusGrid, m: f64) -> (RadialLattice, Vec<f64>) {
        let lattice = RadialLattice::new(grid);
        let lambdas = lattice.norms().iter().map(|&k2| grid.xi_squared_of_norm(k2) + m * m).collect();
        (lattice, lambdas)
    }

    /// Multiplies coefficients by per-norm values.
    fn apply_radial(coeffs: &SpectralField, lattice: &RadialLattice, values: &[Complex64]) -> SpectralField {
        coeffs.map_indexed(|i, c| c * values[lattice.slots()[i] as usize])
    }

    /// `U_t^sigma f`: multiplies `f^(xi)` by `I_sigma(|xi|^2 + m^2, t)`.
    pub fn apply_u(&self, f: &Field, sigma: FractionalOrder, t: f64, m: f64) -> Result<SolutionSnapshot> {
        check_time(t)?;
        check_mass(m)?;
        let (lattice, lambdas) = Self::lattice_lambdas(f.grid(), m);
        let values = self.symbol_values(sigma, &lambdas, t, m)?;
        let field = idft(&Self::apply_radial(&dft(f), &lattice, &values));
        Ok(SolutionSnapshot::new(t, field, Backend::Subordination, sigma, m))
    }

    /// `(1/sin(sigma pi)) Re(i^(1-2 sigma) U_t^sigma f)`: data `u(.,0) = f`, `d_t^sigma u(.,0) = 0`.
    pub fn solve_dirichlet_real(&self, f: &Field, sigma: FractionalOrder, t: f64, m: f64) -> Result<SolutionSnapshot> {
        f.require_real()?;
        let mut u = self.apply_u(f, sigma, t, m)?;
        let rot = sigma.i_one_minus_two_sigma() / sigma.sin_pi();
        u.field = u.field.scaled(rot).to_real();
        Ok(u)
    }

    /// `-(sigma 4^sigma Gamma(sigma) / (sin(sigma pi) Gamma(1-sigma))) Im(U_t^sigma (L^-sigma g))`:
    /// data `u(.,0) = 0`, `d_t^sigma u(.,0) = g`.
    pub fn solve_neumann_real(&self, g: &Field, sigma: FractionalOrder, t: f64, m: f64) -> Result<SolutionSnapshot> {
        g.require_real()?;
        check_mass(m)?;
        let pre = operator_power(g, -sigma.value(), m, ZeroModeRule::Reject)?;
        let mut u = self.apply_u(&pre, sigma, t, m)?;
        u.field = u.field.imag_as_real().scaled(Complex64::new(-sigma.neumann_prefactor(), 0.0));
        Ok(u)
    }

    /// Extrapolates `d_t^sigma (U_t^sigma f)` to `t = 0`.
    ///
    /// At each `t` in the sequence the weighted derivative
    /// `(1/(2 sigma)) t^(1-2 sigma) d_t` is taken with a 5-point stencil of
    /// step `t/10`. Because the step scales with `t`, the stencil maps every
    /// power `t^p` of the symbol's small-`t` expansion to a fixed multiple of
    /// its derivative; the powers `t^(2-2 sigma), t^2, t^(4-2 sigma), t^4, ...`
    /// are eliminated by Richardson extrapolation and the known gain on the
    /// leading power `t^(2 sigma)` is divided out. The result approximates
    /// `-i^(2 sigma) Gamma(1-sigma)/(sigma 4^sigma Gamma(sigma)) (-Delta + m^2)^sigma f`.
    pub fn dtn_extract(&self, f: &Field, sigma: FractionalOrder, t_sequence: &[f64], m: f64) -> Result<Field> {
        check_mass(m)?;
        if t_sequence.len() < 3 {
            return Err(Error::invalid("t_sequence", "Richardson extrapolation needs at least 3 times"));
        }
        for w in t_sequence.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::invalid("t_sequence", "times must be strictly decreasing"));
            }
        }
        for &t in t_sequence {
            check_time(t)?;
        }
        let weights = richardson_weights(sigma, t_sequence)?;
        let s = sigma.value();
        let (lattice, lambdas) = Self::lattice_lambdas(f.grid(), m);
        let mut d0 = vec![Complex64::new(0.0, 0.0); lambdas.len()];
        for (&t, &wt) in t_sequence.iter().zip(&weights) {
            let h = DTN_STEP_RATIO * t;
            let mut deriv = vec![Complex64::new(0.0, 0.0); lambdas.len()];
            for &(o, w) in &STENCIL {
                let vals = self.symbol_values(sigma, &lambdas, t + o * h, m)?;
                for (d, v) in deriv.iter_mut().zip(vals) {
                    *d += w * v;
                }
            }
            let scale = t.powf(1.0 - 2.0 * s) / (2.0 * s * h);
            for (acc, d) in d0.iter_mut().zip(deriv) {
                *acc += wt * scale * d;
            }
        }
        let gain = stencil_gain(2.0 * s, DTN_STEP_RATIO);
        for v in &mut d0 {
            *v /= gain;
        }
        Ok(idft(&Self::apply_radial(&dft(f), &lattice, &d0)))
    }
}

/// Exponents `2-2s, 2, 4-2s, 4, ...` of the correction terms in the weighted derivative.
fn correction_exponents(sigma: FractionalOrder, count: usize) -> Vec<f64> {
    let s = sigma.value();
    let mut out = Vec::with_capacity(count);
    let mut k = 1.0;
    while out.len() < count {
        out.push(2.0 * k - 2.0 * s);
        if out.len() < count {
            out.push(2.0 * k);
        }
        k += 1.0;
    }
    out
}

/// Weights `w_j` with `sum w_j = 1` and `sum w_j t_j^e = 0` for the first `n-1` correction exponents.
fn richardson_weights(sigma: FractionalOrder, ts: &[f64]) -> Result<Vec<f64>> {
    let n = ts.len();
    let exps = correction_exponents(sigma, n - 1);
    let scale = ts[0];
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
    for (j, &t) in ts.iter().enumerate() {
        a[(0, j)] = 1.0;
        for (i, &e) in exps.iter().enumerate() {
            a[(i + 1, j)] = (t / scale).powf(e);
        }
    }
    let mut rhs = nalgebra::DVector::<f64>::zeros(n);
    rhs[0] = 1.0;
    let w = a.lu().solve(&rhs).ok_or_else(|| Error::invalid("t_sequence", "Richardson system is singular"))?;
    Ok(w.iter().copied().collect())
}

/// [`Subordinator::apply_u`] with default options and a fresh cache.
pub fn apply_u(f: &Field, sigma: FractionalOrder, t: f64, m: f64) -> Result<SolutionSnapshot> {
    Subordinator::default().apply_u(f, sigma, t, m)
}

pub fn solve_dirichlet_real(f: &Field, sigma: FractionalOrder, t: f64, m: f64) -> Result<SolutionSnapshot> {
    Subordinator::default().solve_dirichlet_real(f, sigma, t, m)
}

pub fn solve_neumann_real(g: &Field, sigma: FractionalOrder, t: f64, m: f64) -> Result<SolutionSnapshot> {
    Subordinator::default().solve_neumann_real(g, sigma, t, m)
}

pub fn dtn_extract(f: &Field, sigma: FractionalOrder, t_sequence: &[f64], m: f64) -> Result<Field> {
    Subordinator::default().dtn_extract(f, sigma, t_sequence, m)
}

/// Default time sequence for [`dtn_extract`].
pub const DEFAULT_DTN_TIMES: [f64; 5] = [0.08, 0.04, 0.02, 0.01, 0.005];
