//! Experiment harness for `maxent-tomo`: sweep configs, case A/B comparisons,
//! heat maps and CSV output, plus the command-line front end.

pub mod app;
pub mod config;
pub mod experiment;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{Angle, BackendKind, CalibrationKind, ExperimentConfig, HeatmapConfig};
pub use experiment::{case_ab_row, median, run_case_ab, run_sweep, CaseAbReport, CaseAbRow, SweepRow};
pub use output::{case_ab_csv, emit_csv, format_sig, heatmap_csv, sweep_csv};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] maxent_tomo::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Config { path: PathBuf, message: String },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn config(path: &Path, message: impl Into<String>) -> Self {
        CliError::Config {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    /// 2 for invalid input, 3 for an infeasible record, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        use maxent_tomo::Error as E;
        match self {
            CliError::Core(E::Infeasible(_) | E::Degenerate(_)) => 3,
            CliError::Core(E::NoConvergence { .. } | E::IllConditioned { .. }) => 1,
            CliError::Core(_) | CliError::Config { .. } => 2,
            CliError::Io { .. } => 1,
        }
    }
}
