use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{Field, SpectralField};
use super::transform::{dft, idft};
use crate::error::{Error, Result};

/// Zero-mode coefficients below this fraction of the largest coefficient are
/// treated as vanishing.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-11;

/// What to do with the `xi = 0` coefficient when a multiplier is singular there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ZeroModeRule {
    /// Set the coefficient to zero.
    Zero,
    /// Fail unless the coefficient already (numerically) vanishes.
    #[default]
    Reject,
}

/// Checks the zero mode under `rule` and returns the coefficients with it cleared.
pub(crate) fn clear_zero_mode(mut coeffs: SpectralField, rule: ZeroModeRule) -> Result<SpectralField> {
    let c0 = coeffs.zero_mode().norm();
    if rule == ZeroModeRule::Reject && c0 > ZERO_MODE_TOLERANCE * coeffs.max_abs() {
        return Err(Error::NonzeroZeroMode { magnitude: c0 });
    }
    coeffs.values_mut()[0] = Complex64::new(0.0, 0.0);
    Ok(coeffs)
}

/// Applies `(|xi|^2 + mass^2)^order` in frequency space.
pub fn operator_power_spectral(
    coeffs: &SpectralField,
    order: f64,
    mass: f64,
    rule: ZeroModeRule,
) -> Result<SpectralField> {
    if order == 0.0 {
        return Ok(coeffs.clone());
    }
    let grid = *coeffs.grid();
    let singular = mass == 0.0 && order < 0.0;
    let coeffs = if singular {
        clear_zero_mode(coeffs.clone(), rule)?
    } else {
        coeffs.clone()
    };
    let m2 = mass * mass;
    Ok(coeffs.map_indexed(|i, c| {
        let lambda = grid.xi_squared(i) + m2;
        if lambda == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            c * lambda.powf(order)
        }
    }))
}

/// `(-Delta + mass^2)^order f` as a Fourier multiplier.
pub fn operator_power(field: &Field, order: f64, mass: f64, rule: ZeroModeRule) -> Result<Field> {
    if order == 0.0 {
        return Ok(field.clone());
    }
    Ok(idft(&operator_power_spectral(&dft(field), order, mass, rule)?))
}

/// `(-Delta)^order f`: multiplies each coefficient by `|xi|^(2 order)`.
///
/// For negative orders the zero mode is handled by `rule`; for positive
/// orders it is annihilated and for `order = 0` this is the identity.
pub fn fractional_power(field: &Field, order: f64, rule: ZeroModeRule) -> Result<Field> {
    operator_power(field, order, 0.0, rule)
}

/// Discrete Sobolev norm `(L^d sum <xi>^(2s) |c_k|^2)^(1/2)`, `<xi> = (1+|xi|^2)^(1/2)`.
///
/// The `L^d` factor makes `s = 0` agree with the continuum L2 norm on the box.
pub fn sobolev_norm(field: &Field, s: f64) -> f64 {
    sobolev_norm_spectral(&dft(field), s)
}

pub fn sobolev_norm_spectral(coeffs: &SpectralField, s: f64) -> f64 {
    let grid = coeffs.grid();
    // fixed summation order over the lattice
    let sum: f64 = coeffs
        .values()
        .iter()
        .enumerate()
        .map(|(i, c)| (1.0 + grid.xi_squared(i)).powf(s) * c.norm_sqr())
        .sum();
    (grid.volume() * sum).sqrt()
}

/// Spectral gradient; Nyquist modes are dropped so real fields stay real.
pub fn gradient(field: &Field) -> Vec<Field> {
    let grid = *field.grid();
    let coeffs = dft(field);
    let step = grid.frequency_step();
    (0..grid.dim())
        .map(|axis| {
            let c = coeffs.map_indexed(|i, c| {
                if grid.is_nyquist(i) {
                    return Complex64::new(0.0, 0.0);
                }
                let k = grid.wavevector(i)[axis] as f64;
                c * Complex64::new(0.0, step * k)
            });
            idft(&c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::TorusGrid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn mode(grid: TorusGrid, k: [i64; 3], amp: f64) -> Field {
        let step = grid.frequency_step();
        Field::from_fn(grid, |x| {
            let phase: f64 = (0..grid.dim()).map(|a| step * k[a] as f64 * x[a]).sum();
            Complex64::from_polar(amp, phase)
        })
    }

    #[test]
    fn order_zero_is_identity() {
        let grid = TorusGrid::new(2, 8, 3.0).unwrap();
        let f = Field::from_real_fn(grid, |x| 1.0 + x[0] * x[1]);
        let g = fractional_power(&f, 0.0, ZeroModeRule::Reject).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn single_mode_is_eigenfunction() {
        let grid = TorusGrid::new(2, 16, 2.0 * PI).unwrap();
        let f = mode(grid, [2, -3, 0], 1.0);
        let sigma = 0.37;
        let g = fractional_power(&f, sigma, ZeroModeRule::Reject).unwrap();
        let eig = 13f64.powf(sigma);
        let expected = f.scaled(Complex64::new(eig, 0.0));
        assert!(g.relative_distance(&expected).unwrap() < 1e-13);
    }

    #[test]
    fn negative_order_zero_mode_rules() {
        let grid = TorusGrid::new(1, 16, 4.0).unwrap();
        let f = Field::from_real_fn(grid, |x| 1.0 + (PI * x[0] / 2.0).cos());
        let err = fractional_power(&f, -0.3, ZeroModeRule::Reject).unwrap_err();
        assert!(matches!(err, Error::NonzeroZeroMode { .. }));
        let g = fractional_power(&f, -0.3, ZeroModeRule::Zero).unwrap();
        assert!(dft(&g).zero_mode().norm() < 1e-15);
        // positive orders kill the constant without complaint
        let h = fractional_power(&f, 0.3, ZeroModeRule::Reject).unwrap();
        assert!(dft(&h).zero_mode().norm() < 1e-15);
    }

    #[test]
    fn inverse_pair_on_band_passed_data() {
        let grid = TorusGrid::new(2, 16, 2.0 * PI).unwrap();
        let f = mode(grid, [1, 2, 0], 0.5)
            .axpy(Complex64::new(0.3, 0.0), &mode(grid, [-3, 0, 0], 1.0))
            .unwrap();
        let g = fractional_power(&f, 0.6, ZeroModeRule::Reject).unwrap();
        let back = fractional_power(&g, -0.6, ZeroModeRule::Reject).unwrap();
        assert!(back.relative_distance(&f).unwrap() < 1e-13);
    }

    #[test]
    fn sobolev_single_mode() {
        let grid = TorusGrid::new(1, 32, 2.0 * PI).unwrap();
        let amp = 0.7;
        let f = mode(grid, [4, 0, 0], amp);
        for s in [0.0, 0.5, 2.0] {
            let expected = amp * (1.0 + 16.0f64).powf(s / 2.0) * grid.volume().sqrt();
            assert!((sobolev_norm(&f, s) - expected).abs() < 1e-12 * expected);
        }
        assert!((sobolev_norm(&f, 0.0) - f.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn spectral_gradient_of_mode() {
        let grid = TorusGrid::new(2, 16, 2.0 * PI).unwrap();
        let f = mode(grid, [2, 1, 0], 1.0);
        let grad = gradient(&f);
        let dx = f.scaled(Complex64::new(0.0, 2.0));
        let dy = f.scaled(Complex64::new(0.0, 1.0));
        assert!(grad[0].relative_distance(&dx).unwrap() < 1e-13);
        assert!(grad[1].relative_distance(&dy).unwrap() < 1e-13);
    }

    fn field_strategy(grid: TorusGrid) -> impl Strategy<Value = Field> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), grid.len()).prop_map(move |v| {
            Field::from_vec(grid, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn sobolev_is_a_norm(
            f in field_strategy(TorusGrid::new(2, 8, 3.0).unwrap()),
            g in field_strategy(TorusGrid::new(2, 8, 3.0).unwrap()),
            a in -3.0f64..3.0,
            s in 0.0f64..2.0,
        ) {
            let nf = sobolev_norm(&f, s);
            let scaled = sobolev_norm(&f.scaled(Complex64::new(a, 0.0)), s);
            prop_assert!((scaled - a.abs() * nf).abs() <= 1e-12 * (1.0 + scaled));
            let sum = sobolev_norm(&f.axpy(Complex64::new(1.0, 0.0), &g).unwrap(), s);
            prop_assert!(sum <= nf + sobolev_norm(&g, s) + 1e-12 * (1.0 + sum));
        }

        #[test]
        fn sobolev_monotone_in_s(f in field_strategy(TorusGrid::new(1, 16, 2.0).unwrap()), s1 in -1.0f64..2.0, ds in 0.0f64..2.0) {
            prop_assert!(sobolev_norm(&f, s1) <= sobolev_norm(&f, s1 + ds) * (1.0 + 1e-14));
        }

        #[test]
        fn fractional_power_is_diagonal(f in field_strategy(TorusGrid::new(1, 16, 2.0).unwrap()), order in 0.0f64..1.0) {
            // applying the multiplier to the coefficients directly gives the same field
            let grid = *f.grid();
            let direct = idft(&dft(&f).map_indexed(|i, c| c * grid.xi_squared(i).powf(order)));
            let via = fractional_power(&f, order, ZeroModeRule::Zero).unwrap();
            let scale = f.norm().max(1.0);
            prop_assert!(via.sub(&direct).unwrap().norm() <= 1e-12 * scale * (1.0 + grid.nyquist_radius().powf(2.0 * order)));
        }
    }
}
