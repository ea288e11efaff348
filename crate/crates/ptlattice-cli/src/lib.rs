//! Front end for the `pt-lattice` binary: configuration, dispatch to the
//! library and deterministic CSV/JSON output.

pub mod commands;
pub mod config;
pub mod figures;
pub mod table;

use std::io::Write;

use ptlattice::{BoundError, EpError, ModelError, PtScatteringError, ScatteringError, SpectrumError};
use thiserror::Error;

pub use commands::build_table;
pub use config::{Command, FigureId, GridSpec, RunConfig, Settings};
pub use figures::figure_data;
pub use table::{Cell, Column, Format, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("spectrum: {0}")]
    Spectrum(#[from] SpectrumError),
    #[error("exceptional points: {0}")]
    Exceptional(#[from] EpError),
    #[error("bound states: {0}")]
    Bound(#[from] BoundError),
    #[error("scattering: {0}")]
    Scattering(#[from] ScatteringError),
    #[error("PT scattering: {0}")]
    PtScattering(#[from] PtScatteringError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for usage errors, 1 for numeric and I/O failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Rendered output bytes for `config`.
pub fn render(config: &RunConfig) -> Result<Vec<u8>, CliError> {
    build_table(config)?.render(config.format)
}

/// Renders and writes to `--out` or stdout.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let bytes = render(config)?;
    match &config.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
