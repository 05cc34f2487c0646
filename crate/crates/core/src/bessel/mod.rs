//! Bessel functions and the spectral solution multipliers built from them.

pub mod estimates;
pub mod j;
pub mod multiplier;

pub use estimates::{fit_bessel_bound, BesselBoundFit};
pub use j::{bessel_j, bessel_j_scaled, BesselOrder, R_SWITCH};
pub use multiplier::{build_multiplier_plan, fixedtime_ratio, fixedtime_rhs, multiplier_values, solve_bessel, MultiplierPlan};
