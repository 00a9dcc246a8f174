//! JSON run configuration: strict schema, unknown keys rejected.
//!
//! Energies are in natural units (hbar = 1) and, by convention, in units
//! of the first mode's frequency unless `units` is set to `absolute` —
//! the choice is interpretive and echoed into the run manifest.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use gauge_rabi_core::analysis::{SweepMetric, SweepParameter};
use gauge_rabi_core::gauge_models::{Gauge, ModeSpec};
use gauge_rabi_core::schrodinger1d::{Grid1D, PotentialSpec};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    #[default]
    OmegaPh,
    Absolute,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    pub metric: SweepMetric,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Truncation-ladder convergence tolerance on eigenvalues.
    #[serde(default = "default_convergence")]
    pub convergence: f64,
    /// Number of low-lying levels tracked by spectral commands.
    #[serde(default = "default_levels")]
    pub levels: usize,
}

fn default_convergence() -> f64 {
    1e-9
}

fn default_levels() -> usize {
    6
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            convergence: default_convergence(),
            levels: default_levels(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotBlock {
    /// CSV file to plot.
    pub csv: PathBuf,
    /// Column used for the x axis.
    pub x: String,
    /// Columns drawn as polylines.
    pub y: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// Artifact directory (default `out`, overridable with `--out`).
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// Also emit a JSON mirror of each table (same as `--json`).
    #[serde(default)]
    pub json: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub grid: Option<Grid1D>,
    #[serde(default)]
    pub modes: Vec<ModeSpec>,
    #[serde(default)]
    pub gauge: Option<Gauge>,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub plot: Option<PlotBlock>,
    #[serde(default)]
    pub output: Option<OutputBlock>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("config schema error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Structural validation beyond what serde enforces.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(p) = &self.potential {
            p.validate().map_err(config_err)?;
        }
        if let Some(g) = &self.grid {
            g.validate().map_err(config_err)?;
        }
        for m in &self.modes {
            m.validate().map_err(config_err)?;
        }
        if !(self.tolerances.convergence > 0.0) {
            return Err(CliError::Config(
                "tolerances.convergence must be positive".into(),
            ));
        }
        if self.tolerances.levels == 0 {
            return Err(CliError::Config("tolerances.levels must be positive".into()));
        }
        if let Some(s) = &self.sweep {
            if s.grid.is_empty() {
                return Err(CliError::Config("sweep.grid must be nonempty".into()));
            }
        }
        if let Some(p) = &self.plot {
            if p.y.is_empty() {
                return Err(CliError::Config("plot.y must name at least one column".into()));
            }
        }
        Ok(())
    }

    pub fn require_potential(&self) -> Result<&PotentialSpec, CliError> {
        self.potential
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a `potential` block".into()))
    }

    pub fn require_grid(&self) -> Result<&Grid1D, CliError> {
        self.grid
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a `grid` block".into()))
    }

    pub fn require_single_mode(&self) -> Result<&ModeSpec, CliError> {
        match self.modes.as_slice() {
            [m] => Ok(m),
            [] => Err(CliError::Config("this command needs one `modes` entry".into())),
            _ => Err(CliError::Config(
                "this command takes exactly one `modes` entry".into(),
            )),
        }
    }

    pub fn require_gauge(&self) -> Result<Gauge, CliError> {
        self.gauge
            .ok_or_else(|| CliError::Config("this command needs a `gauge` selector".into()))
    }

    pub fn require_sweep(&self) -> Result<&SweepBlock, CliError> {
        self.sweep
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a `sweep` block".into()))
    }

    pub fn require_plot(&self) -> Result<&PlotBlock, CliError> {
        self.plot
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs a `plot` block".into()))
    }
}

pub fn config_err(e: gauge_rabi_core::Error) -> CliError {
    CliError::Config(e.to_string())
}
