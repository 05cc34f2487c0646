//! Command-line front end: configuration, subcommands and exit codes.

pub mod commands;
pub mod config;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use config::{BackendChoice, Channel, KernelChoice, RunConfig};
use fracwave_core::spectral::{Band, BumpShape};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fracwave_core::Error),
    /// Bad flags, config or combination of options.
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for validation failures, 1 for numerical or I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_validation() => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fracwave", version, about = "Degenerate wave equation solvers and cross-checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve on a periodic grid and write the field at time t.
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum)]
        backend: Option<BackendChoice>,
        #[arg(long, value_enum)]
        channel: Option<Channel>,
    },
    /// Tabulate the symbol I_sigma(lambda, t).
    SymbolTable {
        #[command(flatten)]
        common: Common,
        /// start:stop:step
        #[arg(long)]
        lambda: Option<String>,
        /// Several times, comma separated; overrides --t.
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
    },
    /// Evaluate a ball kernel on a line or plane of points.
    KernelEval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum)]
        kernel: Option<KernelChoice>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        /// Square in the first two coordinates instead of a segment.
        #[arg(long)]
        plane: bool,
    },
    /// Radial profile of the Dirichlet and Neumann multipliers.
    MultiplierDump {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Recover the fractional Laplacian from the Dirichlet-to-Neumann limit.
    Dtn {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        data: DataArgs,
        /// Decreasing times, comma separated, at least three.
        #[arg(long, value_delimiter = ',')]
        dtn_times: Option<Vec<f64>>,
    },
    /// Run the cross-checks and print a JSON report and a summary table.
    Verify {
        #[command(flatten)]
        common: Common,
        /// `acceptance` (criteria only), `pde` (residuals only) or `all`.
        #[arg(long, default_value = "acceptance")]
        suite: String,
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub box_length: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    #[arg(long, value_parser = parse_shape)]
    pub shape: Option<BumpShape>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub bumps: Option<usize>,
    #[arg(long)]
    pub spread: Option<f64>,
    /// Band-pass annulus `lo:hi` in frequency.
    #[arg(long)]
    pub band: Option<String>,
}

fn parse_shape(s: &str) -> Result<BumpShape, String> {
    serde_json::from_value(serde_json::Value::String(s.to_lowercase())).map_err(|_| format!("unknown shape `{s}`"))
}

fn parse_band(s: &str) -> Result<Band, CliError> {
    match s.split_once(':').map(|(a, b)| (a.trim().parse::<f64>(), b.trim().parse::<f64>())) {
        Some((Ok(lo), Ok(hi))) => Ok(Band { lo, hi }),
        _ => Err(CliError::Usage(format!("band `{s}` must be lo:hi"))),
    }
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    set(&mut cfg.sigma, common.sigma);
    set(&mut cfg.d, common.d);
    set(&mut cfg.t, common.t);
    set(&mut cfg.seed, common.seed);
    set(&mut cfg.out_dir, common.out_dir.clone());
    Ok(cfg)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl GridArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if self.n.is_some() {
            cfg.n = self.n;
        }
        set(&mut cfg.box_length, self.box_length);
        set(&mut cfg.mass, self.mass);
    }
}

impl DataArgs {
    fn apply(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        set(&mut cfg.data.shape, self.shape);
        set(&mut cfg.data.width, self.width);
        set(&mut cfg.data.count, self.bumps);
        set(&mut cfg.data.spread, self.spread);
        if let Some(b) = &self.band {
            cfg.data.band = Some(parse_band(b)?);
        }
        Ok(())
    }
}

/// Effective configuration for `command`.
pub fn effective_config(command: &Command) -> Result<RunConfig, CliError> {
    let cfg = match command {
        Command::Solve {
            common,
            grid,
            data,
            backend,
            channel,
        } => {
            let mut cfg = load(common)?;
            grid.apply(&mut cfg);
            data.apply(&mut cfg)?;
            set(&mut cfg.backend, *backend);
            set(&mut cfg.channel, *channel);
            cfg
        }
        Command::SymbolTable { common, lambda, times } => {
            let mut cfg = load(common)?;
            set(&mut cfg.lambda, lambda.clone());
            set(&mut cfg.t_values, times.clone());
            cfg
        }
        Command::KernelEval {
            common,
            data,
            kernel,
            from,
            to,
            count,
            plane,
        } => {
            let mut cfg = load(common)?;
            data.apply(&mut cfg)?;
            set(&mut cfg.kernel, *kernel);
            set(&mut cfg.points.from, *from);
            set(&mut cfg.points.to, *to);
            set(&mut cfg.points.count, *count);
            cfg.points.plane |= *plane;
            cfg
        }
        Command::MultiplierDump { common, grid } => {
            let mut cfg = load(common)?;
            grid.apply(&mut cfg);
            cfg
        }
        Command::Dtn {
            common,
            grid,
            data,
            dtn_times,
        } => {
            let mut cfg = load(common)?;
            grid.apply(&mut cfg);
            data.apply(&mut cfg)?;
            set(&mut cfg.dtn_times, dtn_times.clone());
            cfg
        }
        Command::Verify {
            common,
            suite,
            criteria,
        } => {
            let mut cfg = load(common)?;
            set(&mut cfg.criteria, criteria.clone());
            match suite.as_str() {
                "acceptance" => {}
                "all" => cfg.pde_residual = true,
                "pde" => {
                    cfg.pde_residual = true;
                    cfg.criteria = Vec::new();
                }
                other => return Err(CliError::Usage(format!("unknown suite `{other}`; use acceptance, pde or all"))),
            }
            cfg
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Runs `command` with its effective configuration.
pub fn run(command: &Command) -> Result<commands::Outcome, CliError> {
    let cfg = effective_config(command)?;
    match command {
        Command::Solve { .. } => commands::cmd_solve(&cfg),
        Command::SymbolTable { .. } => commands::cmd_symbol_table(&cfg),
        Command::KernelEval { .. } => commands::cmd_kernel_eval(&cfg),
        Command::MultiplierDump { .. } => commands::cmd_multiplier_dump(&cfg),
        Command::Dtn { .. } => commands::cmd_dtn(&cfg),
        Command::Verify { suite, .. } if suite == "pde" => commands::cmd_verify_pde(&cfg),
        Command::Verify { .. } => commands::cmd_verify(&cfg),
    }
}

/// Caps the global thread pool at `FRACWAVE_THREADS` when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("FRACWAVE_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("FRACWAVE_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let numerical = fracwave_core::Error::Convergence {
            what: "contour quadrature",
            estimate: 1e-3,
            tolerance: 1e-10,
        };
        assert_eq!(CliError::from(numerical).exit_code(), 1);
        assert_eq!(CliError::from(fracwave_core::FractionalOrder::new(2.0).unwrap_err()).exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }

    #[test]
    fn flags_override_file_values() {
        let cli = Cli::try_parse_from(["fracwave", "verify", "--suite", "pde", "--seed", "9"]).unwrap();
        let cfg = effective_config(&cli.command).unwrap();
        assert!(cfg.pde_residual && cfg.criteria.is_empty());
        assert_eq!(cfg.seed, 9);
        let cli = Cli::try_parse_from(["fracwave", "verify", "--suite", "everything"]).unwrap();
        assert_eq!(effective_config(&cli.command).unwrap_err().exit_code(), 2);
    }
}
