//! Run manifest written alongside every command's artifacts: the echoed
//! config (lossless — re-running on it reproduces the artifacts), tool
//! version, wall time and warning count.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{io_err, CliError};

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub version: &'a str,
    pub config: &'a RunConfig,
    pub artifacts: Vec<String>,
    pub warnings: usize,
    pub wall_time_seconds: f64,
}

pub fn write_manifest(
    out_dir: &Path,
    command: &str,
    config: &RunConfig,
    artifacts: &[PathBuf],
    warnings: usize,
    started: Instant,
) -> Result<PathBuf, CliError> {
    let manifest = Manifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config,
        artifacts: artifacts
            .iter()
            .map(|p| p.display().to_string())
            .collect(),
        warnings,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    let path = out_dir.join(format!("{command}_manifest.json"));
    let body = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::IoData(format!("serializing manifest: {e}")))?;
    std::fs::write(&path, body + "\n")
        .map_err(|e| io_err(&format!("writing {}", path.display()), e))?;
    Ok(path)
}
