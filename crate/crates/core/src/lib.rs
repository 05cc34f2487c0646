//! Solvers for the degenerate wave equation
//! `u_tt + ((1-2 sigma)/t) u_t = Delta u`, `0 < sigma < 1`,
//! whose Dirichlet-to-Neumann map is a multiple of `(-Delta)^sigma`.

pub mod bessel;
pub mod error;
pub mod kernel;
pub mod order;
pub mod oscillatory;
mod par;
pub mod snapshot;
pub mod subordination;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use order::FractionalOrder;

/// Crate version recorded in output manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use snapshot::{Backend, SolutionSnapshot};
