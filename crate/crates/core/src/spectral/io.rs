//! CSV and JSON output with atomic writes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::field::Field;
use super::grid::TorusGrid;
use crate::error::{Error, Result};

/// Formats with 17 significant digits, `.` as decimal separator.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.16e}")
}

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::invalid("path", format!("`{}` has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Io(e)
    })
}

/// Builds CSV text from a header and rows of numbers.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| format_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// CSV with columns `i0[,i1[,i2]],re,im`, one row per grid point in flat order.
pub fn field_to_csv(field: &Field) -> String {
    let grid = field.grid();
    let mut out = String::with_capacity(grid.len() * 48);
    for a in 0..grid.dim() {
        out.push_str(&format!("i{a},"));
    }
    out.push_str("re,im\n");
    for (flat, v) in field.values().iter().enumerate() {
        let idx = grid.multi_index(flat);
        for i in &idx[..grid.dim()] {
            out.push_str(&format!("{i},"));
        }
        out.push_str(&format_f64(v.re));
        out.push(',');
        out.push_str(&format_f64(v.im));
        out.push('\n');
    }
    out
}

/// Parses the output of [`field_to_csv`] back onto `grid`.
pub fn field_from_csv(grid: TorusGrid, text: &str) -> Result<Field> {
    let mut data = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut seen = 0usize;
    let bad = |line: usize, what: &str| Error::Serialization(format!("line {line}: {what}"));
    for (ln, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != grid.dim() + 2 {
            return Err(bad(ln + 1, "wrong column count"));
        }
        let mut idx = [0usize; 3];
        for a in 0..grid.dim() {
            idx[a] = cells[a].trim().parse().map_err(|_| bad(ln + 1, "bad index"))?;
            if idx[a] >= grid.n() {
                return Err(bad(ln + 1, "index out of range"));
            }
        }
        let re: f64 = cells[grid.dim()].trim().parse().map_err(|_| bad(ln + 1, "bad re"))?;
        let im: f64 = cells[grid.dim() + 1].trim().parse().map_err(|_| bad(ln + 1, "bad im"))?;
        data[grid.flat_index(&idx[..grid.dim()])] = Complex64::new(re, im);
        seen += 1;
    }
    if seen != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} rows", grid.len()),
            found: format!("{seen} rows"),
        });
    }
    Field::from_vec(grid, data)
}

/// Metadata written next to a field CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldManifest {
    pub library_version: String,
    pub grid: TorusGrid,
    pub data_file: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Effective configuration of the run that produced the field.
    #[serde(default)]
    pub config: serde_json::Value,
}

impl FieldManifest {
    pub fn new(grid: TorusGrid, data_file: impl Into<PathBuf>) -> Self {
        Self {
            library_version: crate::VERSION.to_string(),
            grid,
            data_file: data_file.into(),
            backend: None,
            t: None,
            seed: None,
            config: serde_json::Value::Null,
        }
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Serialization(e.to_string()))
}

/// Writes `<stem>.csv` and `<stem>.json` under `dir`; the manifest's `data_file` is the CSV's file name.
pub fn write_field(dir: &Path, stem: &str, field: &Field, mut manifest: FieldManifest) -> Result<(PathBuf, PathBuf)> {
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    manifest.grid = *field.grid();
    manifest.data_file = PathBuf::from(format!("{stem}.csv"));
    write_atomic(&csv_path, field_to_csv(field).as_bytes())?;
    write_atomic(&json_path, to_json_pretty(&manifest)?.as_bytes())?;
    Ok((csv_path, json_path))
}

/// Reads a manifest and the field it points to (relative to the manifest's directory).
pub fn read_field(manifest_path: &Path) -> Result<(Field, FieldManifest)> {
    let text = fs::read_to_string(manifest_path)?;
    let manifest: FieldManifest = serde_json::from_str(&text).map_err(|e| Error::Serialization(e.to_string()))?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let csv = fs::read_to_string(dir.join(&manifest.data_file))?;
    let field = field_from_csv(manifest.grid, &csv)?;
    Ok((field, manifest))
}
