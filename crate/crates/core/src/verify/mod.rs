//! Cross-checks between the backends, closed forms and bounds, reported as [`CheckReport`]s.
//!
//! Checks are grouped into eleven numbered acceptance criteria; [`run_criterion`]
//! runs one group and [`run_acceptance`] all selected groups. Every check is
//! deterministic for a given [`VerifyConfig`].

mod bounds;
mod kernels;
mod spectral;

pub use bounds::run_bound_suite;
pub use kernels::{run_kernel_equivalence, run_limit_study, LimitStudy};
pub use spectral::{run_backend_compare, run_pde_residual};

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::kernel::KernelQuadrature;
use crate::oscillatory::QuadratureSpec;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Outcome of one check. `pass` is `metric <= tolerance` (false for NaN).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub criterion: Option<u8>,
    pub params: serde_json::Value,
    pub metric: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_s: f64,
    pub seed: u64,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, params: serde_json::Value, metric: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            criterion: None,
            params,
            metric,
            tolerance,
            pass: metric <= tolerance,
            runtime_s: 0.0,
            seed: DEFAULT_SEED,
        }
    }
}

/// Settings shared by all checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub seed: u64,
    pub quad: QuadratureSpec,
    pub kernel_quad: KernelQuadrature,
    /// Criteria to run, from 1..=11.
    pub criteria: Vec<u8>,
    /// Also run the PDE-residual checks, which belong to no criterion.
    pub pde_residual: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            quad: QuadratureSpec::default(),
            kernel_quad: KernelQuadrature::default(),
            criteria: (1..=CRITERIA.len() as u8).collect(),
            pde_residual: false,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        self.kernel_quad.validate()?;
        if let Some(&c) = self.criteria.iter().find(|&&c| !(1..=CRITERIA.len() as u8).contains(&c)) {
            return Err(Error::invalid("criteria", format!("unknown criterion {c}; valid are 1..={}", CRITERIA.len())));
        }
        Ok(())
    }
}

/// Short titles of the acceptance criteria, indexed from 1.
pub const CRITERIA: [&str; 11] = [
    "oscillatory Gamma identity",
    "wave-group anchor at sigma = 1/2",
    "contour vs Bessel-K symbol and K_1/2 closed form",
    "symbol ODE residual",
    "Dirichlet-to-Neumann recovery",
    "subordination vs Bessel backend",
    "kernel vs spectral Neumann solves",
    "limiting spherical means",
    "classical sigma = 1/2 formulas",
    "bound suites",
    "finite propagation",
];

/// Runs `f`, stamping each report with the elapsed time (split evenly), the criterion and the seed.
pub(crate) fn timed(
    criterion: Option<u8>,
    seed: u64,
    f: impl FnOnce() -> Result<Vec<CheckReport>>,
) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let mut reports = f()?;
    let per = start.elapsed().as_secs_f64() / reports.len().max(1) as f64;
    for r in &mut reports {
        r.runtime_s = per;
        r.criterion = criterion;
        r.seed = seed;
    }
    Ok(reports)
}

/// Runs the checks of criterion `n`.
pub fn run_criterion(n: u8, config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let c = Some(n);
    let seed = config.seed;
    match n {
        1 => timed(c, seed, || spectral::oscillatory_gamma(config)),
        2 => timed(c, seed, || spectral::wave_group(config)),
        3 => timed(c, seed, || spectral::circle_closure(config)),
        4 => timed(c, seed, || spectral::symbol_ode(config)),
        5 => timed(c, seed, || spectral::dtn_recovery(config)),
        6 => timed(c, seed, || run_backend_compare(config)),
        7 => timed(c, seed, || run_kernel_equivalence(config)),
        8 => timed(c, seed, || {
            let mut out = Vec::new();
            for study in LimitStudy::standard() {
                out.extend(run_limit_study(&study, config)?);
            }
            Ok(out)
        }),
        9 => timed(c, seed, || {
            let mut out = spectral::classical_multipliers(config)?;
            out.extend(kernels::classical_averages(config)?);
            out.extend(kernels::descent_limit(config)?);
            Ok(out)
        }),
        10 => timed(c, seed, || run_bound_suite(config)),
        11 => timed(c, seed, || {
            let mut out = kernels::kernel_support(config)?;
            out.extend(spectral::klein_gordon_leakage(config)?);
            Ok(out)
        }),
        _ => Err(Error::invalid("criterion", format!("unknown criterion {n}"))),
    }
}

/// Runs the selected criteria in order, then the PDE residual checks if enabled.
pub fn run_acceptance(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let mut out = Vec::new();
    for &n in &config.criteria {
        out.extend(run_criterion(n, config)?);
    }
    if config.pde_residual {
        out.extend(timed(None, config.seed, || run_pde_residual(config))?);
    }
    Ok(out)
}

/// Pass flag of each criterion present in `reports`.
pub fn criterion_status(reports: &[CheckReport]) -> Vec<(u8, bool)> {
    let mut status: Vec<(u8, bool)> = Vec::new();
    for r in reports {
        if let Some(c) = r.criterion {
            match status.iter_mut().find(|s| s.0 == c) {
                Some(s) => s.1 &= r.pass,
                None => status.push((c, r.pass)),
            }
        }
    }
    status
}

/// Plain-text table with one row per check and one line per criterion.
pub fn summary_table(reports: &[CheckReport]) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(5);
    let mut s = String::new();
    let _ = writeln!(s, "{:<4} {:<width$} {:>12} {:>12} {:>9} {:>4}", "crit", "check", "metric", "tolerance", "time[s]", "");
    for r in reports {
        let c = r.criterion.map_or("-".to_string(), |c| c.to_string());
        let flag = if r.pass { "ok" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{:<4} {:<width$} {:>12.4e} {:>12.4e} {:>9.3} {:>4}",
            c, r.name, r.metric, r.tolerance, r.runtime_s, flag
        );
    }
    for (c, pass) in criterion_status(reports) {
        let _ = writeln!(s, "criterion {c:>2} ({}): {}", CRITERIA[c as usize - 1], if pass { "PASS" } else { "FAIL" });
    }
    s
}

/// Relative Euclidean distance `|a - b| / |b|` of two sequences.
pub(crate) fn relative_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pass_flag_follows_metric() {
        assert!(CheckReport::new("a", json!({}), 1e-9, 1e-8).pass);
        assert!(!CheckReport::new("a", json!({}), 1e-7, 1e-8).pass);
        assert!(!CheckReport::new("a", json!({}), f64::NAN, 1e-8).pass);
    }

    #[test]
    fn status_and_table() {
        let mut a = CheckReport::new("a", json!({}), 0.0, 1.0);
        a.criterion = Some(2);
        let mut b = CheckReport::new("b", json!({}), 2.0, 1.0);
        b.criterion = Some(2);
        let mut c = CheckReport::new("c", json!({}), 0.0, 1.0);
        c.criterion = Some(3);
        let reports = [a, b, c];
        assert_eq!(criterion_status(&reports), vec![(2, false), (3, true)]);
        let t = summary_table(&reports);
        assert!(t.contains("criterion  2") && t.contains("FAIL") && t.contains("PASS"));
    }

    #[test]
    fn config_validation() {
        assert!(VerifyConfig::default().validate().is_ok());
        let bad = VerifyConfig {
            criteria: vec![12],
            ..VerifyConfig::default()
        };
        assert!(bad.validate().is_err());
        let parsed: VerifyConfig = serde_json::from_str(r#"{"seed": 7, "criteria": [1, 2]}"#).unwrap();
        assert_eq!(parsed.seed, 7);
        assert_eq!(parsed.quad, QuadratureSpec::default());
    }

    #[test]
    fn cheap_criteria_are_reproducible() {
        let cfg = VerifyConfig::default();
        let a = run_criterion(1, &cfg).unwrap();
        let b = run_criterion(1, &cfg).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.metric, y.metric);
            assert!(x.pass);
        }
    }
}
