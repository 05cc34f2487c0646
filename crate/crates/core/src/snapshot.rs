use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::FractionalOrder;
use crate::spectral::Field;

/// Which representation produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Bessel,
    Subordination,
    Kernel,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Bessel => "bessel",
            Backend::Subordination => "subordination",
            Backend::Kernel => "kernel",
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Solution field `u(., t)` with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSnapshot {
    pub t: f64,
    pub field: Field,
    pub backend: Backend,
    pub sigma: FractionalOrder,
    pub mass: f64,
}

impl SolutionSnapshot {
    pub(crate) fn new(t: f64, field: Field, backend: Backend, sigma: FractionalOrder, mass: f64) -> Self {
        Self {
            t,
            field,
            backend,
            sigma,
            mass,
        }
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("time must be finite and > 0, got {t}")));
    }
    Ok(())
}

pub(crate) fn check_mass(m: f64) -> Result<()> {
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::invalid("m", format!("mass must be finite and >= 0, got {m}")));
    }
    Ok(())
}
