use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;

use fracwave_core::bessel::{build_multiplier_plan, solve_bessel};
use fracwave_core::kernel::{
    classical_d2_solve, classical_d3_solve, kernel_solve_many, spherical_mean_solve, KernelSpec, PointQuery,
};
use fracwave_core::oscillatory::symbol_i;
use fracwave_core::spectral::io::{csv_table, to_json_pretty, write_atomic, write_field, FieldManifest};
use fracwave_core::spectral::{
    make_test_data, operator_power, BumpSet, Field, SpatialFunction, TorusGrid, ZeroModeRule,
};
use fracwave_core::subordination::{SubordinationOptions, Subordinator};
use fracwave_core::verify::{run_acceptance, run_pde_residual, summary_table, CheckReport, VerifyConfig, CRITERIA};
use fracwave_core::{Backend, FractionalOrder, VERSION};

use crate::config::{BackendChoice, Channel, KernelChoice, RunConfig};
use crate::CliError;

/// Files written and text for stdout.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub stdout: String,
    /// Some checks failed (`verify` only).
    pub failed: bool,
}

/// Sidecar manifest for table outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub library_version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub data_file: String,
    pub summary: serde_json::Value,
    pub config: &'a RunConfig,
}

fn write_table(cfg: &RunConfig, command: &'static str, stem: &str, csv: String, summary: serde_json::Value) -> Result<Vec<PathBuf>, CliError> {
    let csv_path = cfg.out_dir.join(format!("{stem}.csv"));
    let json_path = cfg.out_dir.join(format!("{stem}.json"));
    let manifest = RunManifest {
        library_version: VERSION,
        command,
        seed: cfg.seed,
        data_file: format!("{stem}.csv"),
        summary,
        config: cfg,
    };
    write_atomic(&csv_path, csv.as_bytes())?;
    write_atomic(&json_path, to_json_pretty(&manifest)?.as_bytes())?;
    Ok(vec![csv_path, json_path])
}

pub fn grid(cfg: &RunConfig) -> Result<TorusGrid, CliError> {
    Ok(TorusGrid::new(cfg.d, cfg.grid_n(), cfg.box_length)?)
}

/// The configured bumps; random ones are drawn from `ChaCha8Rng` seeded with `cfg.seed`.
pub fn bumps(cfg: &RunConfig) -> BumpSet {
    let data = &cfg.data;
    if data.count == 1 && data.spread == 0.0 {
        return BumpSet::single(cfg.d, data.shape, data.width);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let widths = (data.width, data.width_max.unwrap_or(data.width).max(data.width));
    BumpSet::random(cfg.d, data.shape, data.count, data.spread, widths, &mut rng)
}

/// Initial data on the grid, band-passed when a band is configured.
pub fn sampled_data(cfg: &RunConfig, grid: &TorusGrid) -> Result<Field, CliError> {
    Ok(make_test_data(grid, &bumps(cfg), cfg.data.band)?.field)
}

fn order(cfg: &RunConfig) -> Result<FractionalOrder, CliError> {
    Ok(FractionalOrder::new(cfg.sigma)?)
}

fn channels(cfg: &RunConfig, data: &Field) -> (Option<Field>, Option<Field>) {
    match cfg.channel {
        Channel::Neumann => (None, Some(data.clone())),
        Channel::Dirichlet => (Some(data.clone()), None),
        Channel::Both => (Some(data.clone()), Some(data.clone())),
    }
}

fn subordinator(cfg: &RunConfig) -> Result<Subordinator, CliError> {
    Ok(Subordinator::new(SubordinationOptions {
        quad: cfg.quad,
        ..Default::default()
    })?)
}

/// `solve_dirichlet_real(f) + solve_neumann_real(g)`.
pub fn solve_subordination(cfg: &RunConfig, f: Option<&Field>, g: Option<&Field>) -> Result<Field, CliError> {
    let sub = subordinator(cfg)?;
    let sigma = order(cfg)?;
    let mut u: Option<Field> = None;
    if let Some(f) = f {
        u = Some(sub.solve_dirichlet_real(f, sigma, cfg.t, cfg.mass)?.field);
    }
    if let Some(g) = g {
        let v = sub.solve_neumann_real(g, sigma, cfg.t, cfg.mass)?.field;
        u = Some(match u {
            Some(u) => u.axpy(1.0.into(), &v)?,
            None => v,
        });
    }
    u.ok_or_else(|| CliError::Usage("no initial data selected".into()))
}

/// Kernel values at every grid point for the Neumann datum given by the configured bumps.
pub fn solve_kernel(cfg: &RunConfig, grid: &TorusGrid) -> Result<Field, CliError> {
    if cfg.channel != Channel::Neumann {
        return Err(CliError::Usage("the kernel backend solves the Neumann problem only; use --channel neumann".into()));
    }
    if cfg.mass != 0.0 {
        return Err(CliError::Usage("the kernel backend requires mass 0".into()));
    }
    if cfg.data.band.is_some() {
        return Err(CliError::Usage("the kernel backend evaluates the analytic bumps; remove data.band".into()));
    }
    let spec = KernelSpec::new(cfg.d, order(cfg)?)?;
    let queries = (0..grid.len())
        .map(|flat| PointQuery::new(grid.point(flat)[..cfg.d].to_vec(), cfg.t))
        .collect::<Result<Vec<_>, _>>()?;
    let values = kernel_solve_many(&bumps(cfg), &queries, &spec, &cfg.kernel_quad)?;
    Ok(Field::from_real(*grid, &values)?)
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = grid(cfg)?;
    let sigma = order(cfg)?;
    let backends = match cfg.backend {
        BackendChoice::Bessel => vec![Backend::Bessel],
        BackendChoice::Subordination => vec![Backend::Subordination],
        BackendChoice::Kernel => vec![Backend::Kernel],
        BackendChoice::All => vec![Backend::Bessel, Backend::Subordination, Backend::Kernel],
    };
    if backends.contains(&Backend::Kernel) && cfg.channel != Channel::Neumann {
        return Err(CliError::Usage("the kernel backend solves the Neumann problem only; use --channel neumann".into()));
    }
    let data = sampled_data(cfg, &grid)?;
    let (f, g) = channels(cfg, &data);
    let mut out = Outcome::default();
    let mut solutions: Vec<(Backend, Field)> = Vec::new();
    for backend in backends {
        let field = match backend {
            Backend::Bessel => solve_bessel(f.as_ref(), g.as_ref(), sigma, cfg.t, cfg.mass)?.field,
            Backend::Subordination => solve_subordination(cfg, f.as_ref(), g.as_ref())?,
            Backend::Kernel => solve_kernel(cfg, &grid)?,
        };
        let mut manifest = FieldManifest::new(grid, "");
        manifest.backend = Some(backend.name().to_string());
        manifest.t = Some(cfg.t);
        manifest.seed = Some(cfg.seed);
        manifest.config = serde_json::to_value(cfg).map_err(|e| CliError::Usage(e.to_string()))?;
        let (csv, json) = write_field(&cfg.out_dir, &format!("solve_{}", backend.name()), &field, manifest)?;
        out.stdout.push_str(&format!("{backend}: {} ({} points)\n", csv.display(), grid.len()));
        out.files.extend([csv, json]);
        solutions.push((backend, field));
    }
    if solutions.len() > 1 {
        let mut diffs = Vec::new();
        for i in 0..solutions.len() {
            for j in i + 1..solutions.len() {
                let (a, b) = (&solutions[i], &solutions[j]);
                let dist = a.1.relative_distance(&b.1)?;
                out.stdout.push_str(&format!("relative L2 distance {} vs {}: {:.3e}\n", a.0, b.0, dist));
                diffs.push(json!({"a": a.0, "b": b.0, "relative_l2": dist}));
            }
        }
        let path = cfg.out_dir.join("solve_diff.json");
        let body = json!({"library_version": VERSION, "seed": cfg.seed, "differences": diffs, "config": cfg});
        write_atomic(&path, to_json_pretty(&body)?.as_bytes())?;
        out.files.push(path);
    }
    Ok(out)
}

/// Rows `sigma, lambda, t, re, im, err` of `I_sigma(lambda, t)`.
pub fn symbol_rows(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    let sigma = order(cfg)?;
    let lambdas = cfg.lambda_values()?;
    let mut rows = Vec::new();
    for t in cfg.times() {
        for &l in &lambdas {
            let v = symbol_i(sigma, l, t, &cfg.quad)?;
            rows.push(vec![cfg.sigma, l, t, v.value.re, v.value.im, v.abs_error_estimate]);
        }
    }
    Ok(rows)
}

pub fn cmd_symbol_table(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = symbol_rows(cfg)?;
    let n = rows.len();
    let csv = csv_table(&["sigma", "lambda", "t", "re", "im", "err"], rows);
    let files = write_table(cfg, "symbol-table", "symbol_table", csv, json!({"rows": n}))?;
    Ok(Outcome {
        stdout: format!("symbol table: {} ({n} rows)\n", files[0].display()),
        files,
        failed: false,
    })
}

pub fn query_points(cfg: &RunConfig) -> Vec<Vec<f64>> {
    let p = &cfg.points;
    let at = |k: usize| p.from + (p.to - p.from) * k as f64 / (p.count - 1) as f64;
    let mut out = Vec::new();
    if p.plane && cfg.d >= 2 {
        for j in 0..p.count {
            for i in 0..p.count {
                let mut x = vec![0.0; cfg.d];
                x[0] = at(i);
                x[1] = at(j);
                out.push(x);
            }
        }
    } else {
        for i in 0..p.count {
            let mut x = vec![0.0; cfg.d];
            x[0] = at(i);
            out.push(x);
        }
    }
    out
}

pub fn kernel_values(cfg: &RunConfig, points: &[Vec<f64>]) -> Result<Vec<f64>, CliError> {
    let g = bumps(cfg);
    let queries = points
        .iter()
        .map(|x| PointQuery::new(x.clone(), cfg.t))
        .collect::<Result<Vec<_>, _>>()?;
    let quad = &cfg.kernel_quad;
    let one = |f: &dyn Fn(&dyn SpatialFunction, &PointQuery) -> fracwave_core::Result<f64>| {
        queries.iter().map(|q| f(&g, q)).collect::<fracwave_core::Result<Vec<f64>>>()
    };
    Ok(match cfg.kernel {
        KernelChoice::Auto => kernel_solve_many(&g, &queries, &KernelSpec::new(cfg.d, order(cfg)?)?, quad)?,
        KernelChoice::SphericalMean => one(&|g, q| spherical_mean_solve(g, q, cfg.d, quad))?,
        KernelChoice::Classical => match cfg.d {
            2 => one(&|g, q| classical_d2_solve(g, q, quad))?,
            3 => one(&|g, q| classical_d3_solve(g, q, quad))?,
            d => return Err(CliError::Usage(format!("classical formulas need d = 2 or 3, got {d}"))),
        },
    })
}

pub fn cmd_kernel_eval(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let points = query_points(cfg);
    let values = kernel_values(cfg, &points)?;
    let mut header: Vec<String> = (0..cfg.d).map(|a| format!("x{a}")).collect();
    header.extend(["t".to_string(), "u".to_string()]);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = points.iter().zip(&values).map(|(x, &u)| {
        let mut r = x.clone();
        r.extend([cfg.t, u]);
        r
    });
    let csv = csv_table(&header, rows);
    let summary = match cfg.kernel {
        KernelChoice::Auto => json!({"kernel": KernelSpec::new(cfg.d, order(cfg)?)?}),
        k => json!({"kernel": k}),
    };
    let files = write_table(cfg, "kernel-eval", "kernel_eval", csv, summary)?;
    Ok(Outcome {
        stdout: format!("kernel values: {} ({} points)\n", files[0].display(), points.len()),
        files,
        failed: false,
    })
}

pub fn cmd_multiplier_dump(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let plan = build_multiplier_plan(&grid(cfg)?, order(cfg)?, cfg.t, cfg.mass)?;
    let rows: Vec<Vec<f64>> = plan.radial_profile().iter().map(|r| r.to_vec()).collect();
    let n = rows.len();
    let csv = csv_table(&["xi", "lambda", "dirichlet", "neumann"], rows);
    let files = write_table(cfg, "multiplier-dump", "multipliers", csv, json!({"rows": n}))?;
    Ok(Outcome {
        stdout: format!("multipliers: {} ({n} radii)\n", files[0].display()),
        files,
        failed: false,
    })
}

/// Extracted `L^sigma f` (DtN limit over the constant), the spectral `L^sigma f`, and the relative error.
pub fn dtn_fields(cfg: &RunConfig) -> Result<(Field, Field, f64), CliError> {
    let grid = grid(cfg)?;
    let sigma = order(cfg)?;
    let f = sampled_data(cfg, &grid)?;
    let got = subordinator(cfg)?
        .dtn_extract(&f, sigma, &cfg.dtn_times, cfg.mass)?
        .scaled(1.0 / sigma.dtn_constant());
    let expected = operator_power(&f, cfg.sigma, cfg.mass, ZeroModeRule::Reject)?;
    let err = got.relative_distance(&expected)?;
    Ok((got, expected, err))
}

pub fn cmd_dtn(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (got, expected, err) = dtn_fields(cfg)?;
    let grid = *got.grid();
    let mut header: Vec<String> = (0..cfg.d).map(|a| format!("x{a}")).collect();
    header.extend(["extracted", "expected", "abs_error"].map(String::from));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = (0..grid.len()).map(|flat| {
        let mut r = grid.point(flat)[..cfg.d].to_vec();
        let (a, b) = (got.values()[flat].re, expected.values()[flat].re);
        r.extend([a, b, (a - b).abs()]);
        r
    });
    let csv = csv_table(&header, rows);
    let files = write_table(cfg, "dtn", "dtn", csv, json!({"relative_l2_error": err, "t_sequence": cfg.dtn_times}))?;
    Ok(Outcome {
        stdout: format!("dtn: {} (relative L2 error {err:.3e})\n", files[0].display()),
        files,
        failed: false,
    })
}

pub fn verify_config(cfg: &RunConfig) -> VerifyConfig {
    VerifyConfig {
        seed: cfg.seed,
        quad: cfg.quad,
        kernel_quad: cfg.kernel_quad,
        criteria: if cfg.criteria.is_empty() {
            (1..=CRITERIA.len() as u8).collect()
        } else {
            cfg.criteria.clone()
        },
        pde_residual: cfg.pde_residual,
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    report(cfg, run_acceptance(&verify_config(cfg))?)
}

/// Only the PDE-residual checks.
pub fn cmd_verify_pde(cfg: &RunConfig) -> Result<Outcome, CliError> {
    report(cfg, run_pde_residual(&verify_config(cfg))?)
}

fn report(cfg: &RunConfig, reports: Vec<CheckReport>) -> Result<Outcome, CliError> {
    let report_json = to_json_pretty(&reports)?;
    let path = cfg.out_dir.join("verify_report.json");
    write_atomic(&path, report_json.as_bytes())?;
    let manifest_path = cfg.out_dir.join("verify_manifest.json");
    let manifest = json!({"library_version": VERSION, "command": "verify", "seed": cfg.seed,
                          "data_file": "verify_report.json", "config": cfg});
    write_atomic(&manifest_path, to_json_pretty(&manifest)?.as_bytes())?;
    Ok(Outcome {
        stdout: format!("{report_json}\n{}", summary_table(&reports)),
        files: vec![path, manifest_path],
        failed: reports.iter().any(|r| !r.pass),
    })
}
