//! The detect command: threshold jump detection on sampled data.

use std::path::{Path, PathBuf};

use sie_core::piecewise::detect_jumps;

use crate::config::read_samples_csv;
use crate::output::write_json;
use crate::{CliError, CmdResult};

pub fn run(samples_path: &Path, threshold: f64, out: Option<PathBuf>) -> CmdResult {
    let samples = read_samples_csv(samples_path).map_err(|e| (e, out.clone()))?;
    let jumps = detect_jumps(&samples, threshold)
        .map_err(|e| (CliError::from_config_stage(e), out.clone()))?;
    let entries: Vec<serde_json::Value> = jumps
        .thetas()
        .iter()
        .zip(jumps.jumps())
        .map(|(&theta, b)| {
            serde_json::json!({ "theta": theta, "re_jump": b.re, "im_jump": b.im })
        })
        .collect();
    let value = serde_json::json!({ "jumps": entries });
    let text = serde_json::to_string_pretty(&value).unwrap_or_default();
    println!("{text}");
    if let Some(dir) = out {
        write_json(&dir, "jumps.json", &value).map_err(|e| (e, Some(dir.clone())))?;
    }
    Ok(())
}
