use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use fracwave_core::kernel::KernelQuadrature;
use fracwave_core::oscillatory::QuadratureSpec;
use fracwave_core::spectral::{Band, BumpShape};
use fracwave_core::subordination::DEFAULT_DTN_TIMES;
use fracwave_core::verify::DEFAULT_SEED;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Bessel,
    Subordination,
    Kernel,
    All,
}

/// Which initial datum the generated data is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    /// `u(., 0) = 0`, `d_t^sigma u(., 0) = g`.
    Neumann,
    /// `u(., 0) = f`, `d_t^sigma u(., 0) = 0`.
    Dirichlet,
    /// Same profile for `f` and `g`.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum KernelChoice {
    /// Closed form selected by the regime of `d/2 - sigma`.
    Auto,
    SphericalMean,
    /// Classical `sigma = 1/2` averages, `d` in {2, 3}.
    Classical,
}

/// Bumps used as initial data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSpec {
    pub shape: BumpShape,
    /// One bump at the origin when 1 and `spread` is 0; otherwise random bumps.
    pub count: usize,
    pub width: f64,
    /// Random widths are drawn from `[width, width_max]`.
    pub width_max: Option<f64>,
    pub spread: f64,
    pub band: Option<Band>,
}

impl Default for DataSpec {
    fn default() -> Self {
        Self {
            shape: BumpShape::Ricker,
            count: 1,
            width: 0.6,
            width_max: None,
            spread: 0.0,
            band: None,
        }
    }
}

/// Query points for `kernel-eval`: a segment on the first axis, or a square in the first two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PointSpec {
    pub from: f64,
    pub to: f64,
    pub count: usize,
    pub plane: bool,
}

impl Default for PointSpec {
    fn default() -> Self {
        Self {
            from: -2.0,
            to: 2.0,
            count: 41,
            plane: false,
        }
    }
}

/// Effective configuration of a run: file values, then flag overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sigma: f64,
    pub d: usize,
    /// Points per axis; defaults to 256, 64, 32 for `d` = 1, 2, 3.
    pub n: Option<usize>,
    pub box_length: f64,
    pub t: f64,
    /// Times for `symbol-table`; empty means `[t]`.
    pub t_values: Vec<f64>,
    /// `start:stop:step` for `symbol-table`.
    pub lambda: String,
    pub mass: f64,
    pub seed: u64,
    pub backend: BackendChoice,
    pub channel: Channel,
    pub kernel: KernelChoice,
    pub data: DataSpec,
    pub points: PointSpec,
    pub dtn_times: Vec<f64>,
    pub quad: QuadratureSpec,
    pub kernel_quad: KernelQuadrature,
    /// Criteria for `verify`; empty means all.
    pub criteria: Vec<u8>,
    pub pde_residual: bool,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sigma: 0.5,
            d: 1,
            n: None,
            box_length: 16.0,
            t: 1.0,
            t_values: Vec::new(),
            lambda: "0:10:0.5".into(),
            mass: 0.0,
            seed: DEFAULT_SEED,
            backend: BackendChoice::Bessel,
            channel: Channel::Neumann,
            kernel: KernelChoice::Auto,
            data: DataSpec::default(),
            points: PointSpec::default(),
            dtn_times: DEFAULT_DTN_TIMES.to_vec(),
            quad: QuadratureSpec::default(),
            kernel_quad: KernelQuadrature::default(),
            criteria: Vec::new(),
            pde_residual: false,
            out_dir: PathBuf::from("fracwave-out"),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config `{}`: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config `{}`: {e}", path.display())))
    }

    pub fn grid_n(&self) -> usize {
        self.n.unwrap_or(match self.d {
            1 => 256,
            2 => 64,
            _ => 32,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        if self.t_values.is_empty() {
            vec![self.t]
        } else {
            self.t_values.clone()
        }
    }

    /// Parses `start:stop:step` into its values, `stop` included up to rounding.
    pub fn lambda_values(&self) -> Result<Vec<f64>, CliError> {
        parse_range(&self.lambda)
    }

    /// Checks that do not depend on the subcommand; the library validates the rest.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if !(self.t > 0.0 && self.t.is_finite()) {
            return bad(format!("t must be positive and finite, got {}", self.t));
        }
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return bad(format!("mass must be >= 0, got {}", self.mass));
        }
        if self.data.count == 0 {
            return bad("data.count must be at least 1".into());
        }
        if self.points.count < 2 {
            return bad(format!("points.count must be at least 2, got {}", self.points.count));
        }
        Ok(())
    }
}

pub fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("range `{spec}` must be start:stop:step with step > 0 and start <= stop"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    match parts[..] {
        [a] => Ok(vec![a]),
        [a, b, h] if h > 0.0 && a <= b && a.is_finite() && b.is_finite() => {
            let steps = ((b - a) / h + 1e-9).floor() as usize;
            if steps > 10_000_000 {
                return Err(CliError::Usage(format!("range `{spec}` has too many points")));
            }
            Ok((0..=steps).map(|k| a + k as f64 * h).collect())
        }
        _ => Err(bad()),
    }
}
