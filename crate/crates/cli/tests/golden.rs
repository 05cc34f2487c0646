//! CLI output against direct library calls.

use std::path::Path;
use std::process::{Command, Output};

use fracwave_core::bessel::{build_multiplier_plan, solve_bessel};
use fracwave_core::kernel::{kernel_solve, KernelQuadrature, KernelSpec, PointQuery};
use fracwave_core::oscillatory::{symbol_i, QuadratureSpec};
use fracwave_core::spectral::io::read_field;
use fracwave_core::spectral::{BumpSet, BumpShape, SpatialFunction, TorusGrid};
use fracwave_core::verify::CheckReport;
use fracwave_core::FractionalOrder;

fn fracwave(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracwave"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .env_remove("FRACWAVE_THREADS")
        .output()
        .unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn order(s: f64) -> FractionalOrder {
    FractionalOrder::new(s).unwrap()
}

#[test]
fn symbol_table_matches_library_and_wave_group() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracwave(&["symbol-table", "--sigma", "0.5", "--lambda", "0:10:0.5", "--t", "1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&dir.path().join("symbol_table.csv"));
    assert_eq!(header, ["sigma", "lambda", "t", "re", "im", "err"]);
    assert_eq!(rows.len(), 21);
    for r in &rows {
        let v = symbol_i(order(0.5), r[1], r[2], &QuadratureSpec::default()).unwrap();
        assert_eq!(r[3], v.value.re);
        assert_eq!(r[4], v.value.im);
        assert!((r[3] - (r[2] * r[1].sqrt()).cos()).abs() <= 1e-8);
    }
    let manifest = json(&dir.path().join("symbol_table.json"));
    assert_eq!(manifest["library_version"], fracwave_core::VERSION);
    assert_eq!(manifest["config"]["lambda"], "0:10:0.5");
    assert!(manifest["seed"].is_u64());
}

#[test]
fn solve_bessel_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracwave(&["solve", "--sigma", "0.5", "--d", "1", "--backend", "bessel", "--t", "1.0"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (field, manifest) = read_field(&dir.path().join("solve_bessel.json")).unwrap();
    assert_eq!(manifest.backend.as_deref(), Some("bessel"));
    assert_eq!(manifest.grid.len(), 256);
    assert_eq!(manifest.config["t"], 1.0);

    let grid = TorusGrid::new(1, 256, 16.0).unwrap();
    let g = BumpSet::single(1, BumpShape::Ricker, 0.6).sample(&grid);
    let expected = solve_bessel(None, Some(&g), order(0.5), 1.0, 0.0).unwrap().field;
    assert_eq!(field.values(), expected.values());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"sigma": 0.3, "t": 2.0, "d": 2, "n": 32, "box_length": 12.0}"#).unwrap();
    let out = fracwave(&["multiplier-dump", "--config", cfg.to_str().unwrap(), "--t", "0.5"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = json(&dir.path().join("multipliers.json"));
    assert_eq!(manifest["config"]["sigma"], 0.3);
    assert_eq!(manifest["config"]["t"], 0.5);

    let plan = build_multiplier_plan(&TorusGrid::new(2, 32, 12.0).unwrap(), order(0.3), 0.5, 0.0).unwrap();
    let (header, rows) = csv_rows(&dir.path().join("multipliers.csv"));
    assert_eq!(header, ["xi", "lambda", "dirichlet", "neumann"]);
    let profile = plan.radial_profile();
    assert_eq!(rows.len(), profile.len());
    for (r, p) in rows.iter().zip(&profile) {
        assert_eq!(r[..], p[..]);
    }
}

#[test]
fn kernel_eval_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracwave(
        &["kernel-eval", "--sigma", "0.6", "--d", "2", "--t", "0.7", "--from", "-1", "--to", "1", "--count", "5"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&dir.path().join("kernel_eval.csv"));
    assert_eq!(header, ["x0", "x1", "t", "u"]);
    let g = BumpSet::single(2, BumpShape::Ricker, 0.6);
    let spec = KernelSpec::new(2, order(0.6)).unwrap();
    for r in &rows {
        let q = PointQuery::new(vec![r[0], r[1]], 0.7).unwrap();
        assert_eq!(r[3], kernel_solve(&g, &q, &spec, &KernelQuadrature::default()).unwrap());
    }
    assert_eq!(rows.len(), 5);
}

#[test]
fn dtn_reports_small_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracwave(&["dtn", "--sigma", "0.4", "--d", "2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = json(&dir.path().join("dtn.json"));
    assert!(manifest["summary"]["relative_l2_error"].as_f64().unwrap() < 1e-4);
    let (header, rows) = csv_rows(&dir.path().join("dtn.csv"));
    assert_eq!(header, ["x0", "x1", "extracted", "expected", "abs_error"]);
    assert_eq!(rows.len(), 64 * 64);
}

#[test]
fn all_backends_agree_and_write_a_diff() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracwave(&["solve", "--backend", "all", "--sigma", "0.3", "--t", "0.8"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for b in ["bessel", "subordination", "kernel"] {
        assert!(dir.path().join(format!("solve_{b}.csv")).exists());
    }
    let diff = json(&dir.path().join("solve_diff.json"));
    let diffs = diff["differences"].as_array().unwrap();
    assert_eq!(diffs.len(), 3);
    for d in diffs {
        assert!(d["relative_l2"].as_f64().unwrap() < 1e-6, "{d}");
    }
}

#[test]
fn verify_prints_reports_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracwave(&["verify", "--criteria", "1,2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let reports: Vec<CheckReport> =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify_report.json")).unwrap()).unwrap();
    assert!(reports.iter().all(|r| r.pass && matches!(r.criterion, Some(1 | 2))));
    let table_at = stdout.find("crit ").unwrap();
    let printed: Vec<CheckReport> = serde_json::from_str(&stdout[..table_at]).unwrap();
    assert_eq!(printed, reports);
    assert!(stdout.contains("criterion  1 (oscillatory Gamma identity): PASS"));
}

#[test]
fn validation_failures_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracwave(&["solve", "--sigma", "1.0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0,1)"));

    let out = fracwave(&["solve", "--shape", "gaussian"], dir.path());
    assert_eq!(out.status.code(), Some(2), "Neumann data with a nonzero mean");

    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"sigmaa": 0.3}"#).unwrap();
    let out = fracwave(&["symbol-table", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_fracwave"))
        .args(["multiplier-dump", "--out-dir"])
        .arg(dir.path())
        .env("FRACWAVE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("multipliers.csv").exists());
}

#[test]
fn thread_cap_does_not_change_results() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["solve", "--backend", "subordination", "--d", "2", "--sigma", "0.7"];
    assert!(fracwave(&args, a.path()).status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_fracwave"))
        .args(args)
        .arg("--out-dir")
        .arg(b.path())
        .env("FRACWAVE_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let read = |d: &Path| std::fs::read_to_string(d.join("solve_subordination.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}
