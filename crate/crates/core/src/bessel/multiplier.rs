//! Spectral solution operator
//! `u^ = (Gamma(1-s)/2^s) r^s J_{-s}(r) f^ + s 2^s Gamma(s) r^s J_s(r) lambda^(-s) g^`,
//! `r = t sqrt(lambda)`, `lambda = |xi|^2 + m^2`.

use num_complex::Complex64;

use super::j::{bessel_j_scaled, BesselOrder};
use crate::error::{Error, Result};
use crate::order::FractionalOrder;
use crate::snapshot::{check_mass, check_time, Backend, SolutionSnapshot};
use crate::spectral::ops::clear_zero_mode;
use crate::spectral::{dft, idft, sobolev_norm, Field, RadialLattice, TorusGrid, ZeroModeRule};

/// Dirichlet and Neumann multipliers over the lattice of a grid, one value per distinct `|k|^2`.
#[derive(Debug, Clone)]
pub struct MultiplierPlan {
    sigma: FractionalOrder,
    t: f64,
    mass: f64,
    grid: TorusGrid,
    lattice: RadialLattice,
    dirichlet: Vec<f64>,
    neumann: Vec<f64>,
}

/// `(D, N)` at a single `lambda`; `N(0)` is stored as 0 (see [`build_multiplier_plan`]).
pub fn multiplier_values(sigma: FractionalOrder, t: f64, lambda: f64) -> Result<(f64, f64)> {
    let s = sigma.value();
    let r = t * lambda.sqrt();
    let d = crate::special::gamma(1.0 - s) / 2f64.powf(s) * bessel_j_scaled(BesselOrder::new(-s)?, r)?;
    let n = if lambda == 0.0 {
        0.0
    } else {
        s * 2f64.powf(s) * crate::special::gamma(s) * t.powf(2.0 * s) * bessel_j_scaled(BesselOrder::new(s)?, r)?
    };
    Ok((d, n))
}

/// Tabulates both channels over the distinct lattice norms of `grid`.
///
/// The Neumann value at `lambda = 0` (only reachable with `m = 0`) is stored
/// as 0; Neumann data must then have a vanishing zero mode, which
/// [`solve_bessel`] enforces.
pub fn build_multiplier_plan(grid: &TorusGrid, sigma: FractionalOrder, t: f64, m: f64) -> Result<MultiplierPlan> {
    check_time(t)?;
    check_mass(m)?;
    let lattice = RadialLattice::new(grid);
    let lambdas: Vec<f64> = lattice.norms().iter().map(|&k2| grid.xi_squared_of_norm(k2) + m * m).collect();
    let values = crate::par::map(&lambdas, |&l| multiplier_values(sigma, t, l));
    let mut dirichlet = Vec::with_capacity(values.len());
    let mut neumann = Vec::with_capacity(values.len());
    for v in values {
        let (d, n) = v?;
        if !(d.is_finite() && n.is_finite()) {
            return Err(Error::Convergence {
                what: "multiplier evaluation",
                estimate: f64::INFINITY,
                tolerance: 0.0,
            });
        }
        dirichlet.push(d);
        neumann.push(n);
    }
    Ok(MultiplierPlan {
        sigma,
        t,
        mass: m,
        grid: *grid,
        lattice,
        dirichlet,
        neumann,
    })
}

impl MultiplierPlan {
    pub fn sigma(&self) -> FractionalOrder {
        self.sigma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn dirichlet_at(&self, flat: usize) -> f64 {
        self.dirichlet[self.lattice.slots()[flat] as usize]
    }

    pub fn neumann_at(&self, flat: usize) -> f64 {
        self.neumann[self.lattice.slots()[flat] as usize]
    }

    /// Rows `(|xi|, lambda, D, N)` over distinct norms, ascending.
    pub fn radial_profile(&self) -> Vec<[f64; 4]> {
        self.lattice
            .norms()
            .iter()
            .zip(self.dirichlet.iter().zip(&self.neumann))
            .map(|(&k2, (&d, &n))| {
                let xi2 = self.grid.xi_squared_of_norm(k2);
                [xi2.sqrt(), xi2 + self.mass * self.mass, d, n]
            })
            .collect()
    }

    /// `D f^ + N g^` back in physical space.
    pub fn apply(&self, f: Option<&Field>, g: Option<&Field>) -> Result<Field> {
        if f.is_none() && g.is_none() {
            return Err(Error::invalid("f", "at least one of f and g is required"));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        if let Some(f) = f {
            self.grid.check_same(f.grid())?;
            for (i, (o, c)) in out.iter_mut().zip(dft(f).values()).enumerate() {
                *o += self.dirichlet_at(i) * c;
            }
        }
        if let Some(g) = g {
            self.grid.check_same(g.grid())?;
            let mut coeffs = dft(g);
            if self.mass == 0.0 {
                coeffs = clear_zero_mode(coeffs, ZeroModeRule::Reject)?;
            }
            for (i, (o, c)) in out.iter_mut().zip(coeffs.values()).enumerate() {
                *o += self.neumann_at(i) * c;
            }
        }
        Ok(idft(&crate::spectral::SpectralField::from_vec(self.grid, out)?))
    }
}

/// Solution at time `t` with `u(.,0) = f` and `d_t^sigma u(.,0) = g`; missing data is taken as zero.
pub fn solve_bessel(f: Option<&Field>, g: Option<&Field>, sigma: FractionalOrder, t: f64, m: f64) -> Result<SolutionSnapshot> {
    let grid = f.or(g).map(|x| *x.grid()).ok_or_else(|| Error::invalid("f", "at least one of f and g is required"))?;
    let plan = build_multiplier_plan(&grid, sigma, t, m)?;
    let field = plan.apply(f, g)?;
    Ok(SolutionSnapshot::new(t, field, Backend::Bessel, sigma, m))
}

/// `||u(.,t)||_{2,s}` over the right-hand side of the fixed-time estimate for the branch of `sigma`.
///
/// `sigma <= 1/2`: `||f||_{2,s} + t^(2 sigma) ||g||_2 + ||g||_{2,s-2 sigma}`;
/// `sigma >= 1/2`: `(1+t)^(sigma-1/2) ||f||_{2,s+sigma-1/2} + t^(2 sigma) ||g||_2 + t^(sigma-1/2) ||g||_{2,s-sigma-1/2}`.
/// Returns 0 when both data vanish.
pub fn fixedtime_ratio(f: Option<&Field>, g: Option<&Field>, sigma: FractionalOrder, t: f64, s: f64) -> Result<f64> {
    let u = solve_bessel(f, g, sigma, t, 0.0)?;
    let num = sobolev_norm(&u.field, s);
    let denom = fixedtime_rhs(f, g, sigma, t, s, sigma.value() <= 0.5);
    if num == 0.0 {
        return Ok(0.0);
    }
    Ok(num / denom)
}

/// Right-hand side of the fixed-time estimate; `low_branch` selects the `sigma <= 1/2` form.
pub fn fixedtime_rhs(f: Option<&Field>, g: Option<&Field>, sigma: FractionalOrder, t: f64, s: f64, low_branch: bool) -> f64 {
    let sg = sigma.value();
    let fn_ = |x: Option<&Field>, k: f64| x.map_or(0.0, |x| sobolev_norm(x, k));
    if low_branch {
        fn_(f, s) + t.powf(2.0 * sg) * fn_(g, 0.0) + fn_(g, s - 2.0 * sg)
    } else {
        (1.0 + t).powf(sg - 0.5) * fn_(f, s + sg - 0.5) + t.powf(2.0 * sg) * fn_(g, 0.0) + t.powf(sg - 0.5) * fn_(g, s - sg - 0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_test_data, Band, BumpSet, BumpShape};
    use std::f64::consts::PI;

    fn order(s: f64) -> FractionalOrder {
        FractionalOrder::new(s).unwrap()
    }

    #[test]
    fn half_order_is_cos_and_sinc() {
        let grid = TorusGrid::new(2, 16, 7.0).unwrap();
        let t = 1.3;
        let plan = build_multiplier_plan(&grid, order(0.5), t, 0.0).unwrap();
        for flat in 1..grid.len() {
            let xi = grid.xi_squared(flat).sqrt();
            assert!((plan.dirichlet_at(flat) - (t * xi).cos()).abs() <= 1e-12);
            assert!((plan.neumann_at(flat) - (t * xi).sin() / xi).abs() <= 1e-12);
        }
        assert!((plan.dirichlet_at(0) - 1.0).abs() < 1e-15);
        assert_eq!(plan.neumann_at(0), 0.0);
    }

    #[test]
    fn dirichlet_tends_to_one_as_t_vanishes() {
        let grid = TorusGrid::new(1, 32, 10.0).unwrap();
        let mut last = f64::INFINITY;
        for t in [1e-1, 1e-2, 1e-3] {
            let plan = build_multiplier_plan(&grid, order(0.3), t, 0.0).unwrap();
            let dev = (0..grid.len()).map(|i| (plan.dirichlet_at(i) - 1.0).abs()).fold(0.0, f64::max);
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn massive_zero_frequency() {
        let grid = TorusGrid::new(1, 8, 4.0).unwrap();
        let (s, t, m) = (0.4, 0.7, 2.0);
        let plan = build_multiplier_plan(&grid, order(s), t, m).unwrap();
        let r = t * m;
        let jm = crate::bessel::bessel_j(BesselOrder::new(-s).unwrap(), r).unwrap();
        let exact = crate::special::gamma(1.0 - s) / 2f64.powf(s) * r.powf(s) * jm;
        assert!((plan.dirichlet_at(0) - exact).abs() < 1e-14);
        assert!(plan.neumann_at(0) > 0.0);
    }

    #[test]
    fn zero_data_and_single_mode() {
        let grid = TorusGrid::new(1, 16, 2.0 * PI).unwrap();
        let zero = Field::zeros(grid);
        let u = solve_bessel(Some(&zero), Some(&zero), order(0.3), 1.0, 0.0).unwrap();
        assert_eq!(u.field.max_abs(), 0.0);
        assert_eq!(u.backend, Backend::Bessel);

        let f = Field::from_fn(grid, |x| Complex64::from_polar(1.0, 3.0 * x[0]));
        let u = solve_bessel(Some(&f), None, order(0.5), 0.8, 0.0).unwrap();
        let expected = f.scaled(Complex64::new((0.8f64 * 3.0).cos(), 0.0));
        assert!(u.field.relative_distance(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn small_time_recovers_data() {
        let grid = TorusGrid::new(1, 128, 40.0).unwrap();
        let data = make_test_data(&grid, &BumpSet::single(1, BumpShape::Gaussian, 1.0), Some(Band { lo: 0.3, hi: 4.0 })).unwrap();
        let u = solve_bessel(Some(&data.field), None, order(0.3), 1e-4, 0.0).unwrap();
        assert!(u.field.relative_distance(&data.field).unwrap() <= 1e-6);
        assert!(u.field.max_imag() <= 1e-10);
    }

    #[test]
    fn neumann_requires_band_passed_data() {
        let grid = TorusGrid::new(1, 32, 10.0).unwrap();
        let g = Field::from_real_fn(grid, |x| (-x[0] * x[0]).exp());
        assert!(solve_bessel(None, Some(&g), order(0.3), 1.0, 0.0).is_err());
        assert!(solve_bessel(None, Some(&g), order(0.3), 1.0, 1.0).is_ok());
        assert!(solve_bessel(None, None, order(0.3), 1.0, 0.0).is_err());
        assert!(build_multiplier_plan(&grid, order(0.3), 0.0, 0.0).is_err());
    }

    #[test]
    fn fixedtime_branches_meet_at_half() {
        let grid = TorusGrid::new(1, 64, 30.0).unwrap();
        let data = make_test_data(&grid, &BumpSet::single(1, BumpShape::Gaussian, 1.0), Some(Band { lo: 0.3, hi: 3.0 })).unwrap();
        let f = Some(&data.field);
        let lo = fixedtime_rhs(f, f, order(0.5), 2.0, 1.0, true);
        let hi = fixedtime_rhs(f, f, order(0.5), 2.0, 1.0, false);
        assert!((lo - hi).abs() < 1e-12 * lo);
        assert_eq!(fixedtime_ratio(Some(&Field::zeros(grid)), None, order(0.3), 1.0, 0.0).unwrap(), 0.0);
    }
}
