//! Periodic grids, discrete Fourier transforms and spectral operators.

pub mod data;
pub mod field;
pub mod grid;
pub mod io;
pub mod ops;
pub mod transform;

pub use data::{make_test_data, unit_sphere_area, Band, Bump, BumpSet, BumpShape, CompactBump, Constant, SpatialFunction, TestData, TrigInterpolant};
pub use field::{Field, SpectralField};
pub use grid::{RadialLattice, TorusGrid};
pub use ops::{fractional_power, gradient, operator_power, sobolev_norm, ZeroModeRule, ZERO_MODE_TOLERANCE};
pub use transform::{dft, idft, parseval_factor};
