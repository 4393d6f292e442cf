//! Command-line orchestration: configuration, runs, trajectory diagnostics,
//! manufactured-solution studies and reports.

pub mod config;
pub mod pipeline;
pub mod report;
pub mod svg;

pub use config::{Config, ConfigError, Toggles};

use apev_diagnostics::DiagnosticsError;
use apev_discretization::snapshot::SnapshotError;
use apev_discretization::{GridError, NormError};
use apev_geometry::GeometryError;
use apev_initdata::InitError;
use apev_mms::MmsError;
use apev_solver::SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("monitor tripped at t = {t}: {}", monitors.join(", "))]
    MonitorTrip { t: f64, monitors: Vec<String> },
    #[error("run aborted: {0}")]
    Blowup(String),
    #[error("I/O: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit status.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::MonitorTrip { .. } => 3,
            CliError::Blowup(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<SnapshotError> for CliError {
    fn from(e: SnapshotError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Blowup(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Blowup(e.to_string())
    }
}

impl From<NormError> for CliError {
    fn from(e: NormError) -> Self {
        CliError::Blowup(e.to_string())
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        CliError::Config(ConfigError::Invalid(e.to_string()))
    }
}

impl From<InitError> for CliError {
    fn from(e: InitError) -> Self {
        CliError::Config(ConfigError::Invalid(e.to_string()))
    }
}

impl From<DiagnosticsError> for CliError {
    fn from(e: DiagnosticsError) -> Self {
        match e {
            DiagnosticsError::Solver(s) => s.into(),
            DiagnosticsError::Geometry(g) => g.into(),
            DiagnosticsError::MonitorNotGreen { value, limit } => {
                CliError::MonitorTrip { t: f64::NAN, monitors: vec![format!("a_minus_I ({value:.3e} > {limit})")] }
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<MmsError> for CliError {
    fn from(e: MmsError) -> Self {
        match e {
            MmsError::UnknownCase(_) | MmsError::TooFewLevels(_) | MmsError::Grid(_) => CliError::Usage(e.to_string()),
            MmsError::Io(io) => io.into(),
            MmsError::Solver(s) => s.into(),
            MmsError::Norm(n) => n.into(),
        }
    }
}
