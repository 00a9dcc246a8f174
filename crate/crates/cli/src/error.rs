//! CLI error taxonomy mapped to the exit-code contract:
//! 0 ok, 2 config, 3 numeric, 4 io/data.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Schema violations, missing blocks, bad flags or env vars.
    Config(String),
    /// Solver and model failures (boundary leak, degeneracy, caps).
    Numeric(gauge_rabi_core::Error),
    /// Filesystem and data-shape problems (missing columns, empty CSVs).
    IoData(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::IoData(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(e) => write!(f, "numeric error: {e}"),
            CliError::IoData(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<gauge_rabi_core::Error> for CliError {
    fn from(e: gauge_rabi_core::Error) -> Self {
        CliError::Numeric(e)
    }
}

pub fn io_err(context: &str, e: std::io::Error) -> CliError {
    CliError::IoData(format!("{context}: {e}"))
}
