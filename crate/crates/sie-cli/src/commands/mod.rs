pub mod approx;
pub mod detect;
pub mod ops_check;
pub mod solve;
pub mod study;

use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::CliError;

/// Resolves the output directory: the --out flag wins over the config.
pub fn resolve_out(cfg: &RunConfig, out: Option<PathBuf>) -> PathBuf {
    out.unwrap_or_else(|| cfg.output.directory.clone())
}

/// Loads the config, attaching no output directory to load errors (none is
/// known yet).
pub fn load_config(path: &Path) -> Result<RunConfig, (CliError, Option<PathBuf>)> {
    RunConfig::load(path).map_err(|e| (e, None))
}
