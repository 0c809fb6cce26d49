//! Deterministic file output: CSV with fixed 17-significant-digit floats,
//! JSON reports, and the machine-readable error object.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// 17 significant digits, fixed scientific format.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Complex scalar as one CSV cell: re{+,-}im i.
pub fn fmt_complex(re: f64, im: f64) -> String {
    if im >= 0.0 || im.is_nan() {
        format!("{}+{}i", fmt_float(re), fmt_float(im))
    } else {
        format!("{}-{}i", fmt_float(re), fmt_float(-im))
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::config(format!("cannot create output directory {dir:?}: {e}")))
}

pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &str,
    rows: &[Vec<String>],
) -> Result<PathBuf, CliError> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    let mut out = String::with_capacity(rows.len() * 64 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(&path, out)
        .map_err(|e| CliError::numerics(format!("cannot write {path:?}: {e}")))?;
    Ok(path)
}

pub fn write_json(
    dir: &Path,
    name: &str,
    value: &serde_json::Value,
) -> Result<PathBuf, CliError> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::numerics(format!("json serialization failed: {e}")))?;
    text.push('\n');
    fs::write(&path, text)
        .map_err(|e| CliError::numerics(format!("cannot write {path:?}: {e}")))?;
    Ok(path)
}

/// Prints the error object to stdout and mirrors it into the output
/// directory when one is known.
pub fn emit_error(err: &CliError, out_dir: Option<&Path>) {
    let value = serde_json::json!({
        "error": { "code": err.code, "message": err.message }
    });
    let text = serde_json::to_string_pretty(&value).unwrap_or_default();
    let mut stdout = std::io::stdout();
    let _ = writeln!(stdout, "{text}");
    if let Some(dir) = out_dir {
        if fs::create_dir_all(dir).is_ok() {
            let _ = fs::write(dir.join("error.json"), format!("{text}\n"));
        }
    }
}
