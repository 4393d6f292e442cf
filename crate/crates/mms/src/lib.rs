//! Manufactured solutions for the forced ALE Euler–plate system and the
//! refinement studies built on them.
//!
//! Each case supplies closed-form fields with exact partials (via [`Dual`])
//! and the source terms that make them solve the forced equations. The
//! case itself implements the solver's [`apev_solver::Forcing`].

pub mod case;
pub mod dual;
pub mod study;

pub use case::{build_case, CaseName, MmsCase, PlateMode};
pub use dual::{Dual, Point};
pub use study::{convergence_study, error_norms, final_time, ladder, run_level, Level, Study, StudyRow};

use apev_discretization::{GridError, NormError};
use apev_solver::SolverError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MmsError {
    #[error("unknown manufactured case `{0}` (expected a|frozen, b|plate, c|coupled)")]
    UnknownCase(String),
    #[error("a convergence study needs at least 3 levels, got {0}")]
    TooFewLevels(usize),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
