//! Computable residuals of the identities satisfied by smooth solutions of the
//! ALE Euler–plate system, term-by-term energy ledgers, div-curl recovery and
//! the runtime range monitors.
//!
//! Every function reads solver [`State`](apev_solver::State)s; time
//! derivatives come from a [`JetWindow`] of consecutive states.

pub mod divcurl;
pub mod identities;
pub mod kinematics;
pub mod ledger;
pub mod monitor;
pub mod window;

pub use divcurl::{divcurl_reconstruct, DivCurl, Metric};
pub use identities::{
    apply_q, divergence_identity_residual, g_equation_residual, h_boundary, h_extension, qg_residual,
    tangency_residual, vorticity_and_residual, GResidual,
};
pub use ledger::{energy_ledger, LedgerKind, LedgerRow};
pub use monitor::{monitor, MonitorReport, NormEntry};
pub use window::{fornberg, JetWindow};

use apev_discretization::NormError;
use apev_geometry::GeometryError;
use apev_solver::SolverError;

#[derive(Debug, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("time window holds {have} states, {need} required")]
    Window { have: usize, need: usize },
    #[error("div-curl reconstruction needs ‖a − I‖_H² ≤ {limit}, measured {value}")]
    MonitorNotGreen { value: f64, limit: f64 },
    #[error("unknown ledger `{0}` (expected momentum, plate, plateW or density)")]
    UnknownLedger(String),
    #[error("ledger order {0} outside 0..=3")]
    Order(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Norm(#[from] NormError),
}
