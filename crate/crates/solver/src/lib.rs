//! Coupled time integration of the ALE Euler system and the damped plate.
//!
//! Fluid unknowns `(v, R)` live on `Ω = T² × [0, 1]`, the plate unknowns
//! `(w, w_t)` on the top boundary Γ₁. At every Runge–Kutta stage the
//! geometry is rebuilt from the current plate state and the boundary
//! conditions `v₃|Γ₀ = 0`, `b₃ᵢvᵢ|Γ₁ = w_t` are imposed.

mod algebra;
mod law;
pub mod plate;
pub mod rhs;
mod state;
mod stepper;

pub use algebra::FieldAlgebra;
pub use law::{LawError, PressureFields, PressureLaw};
pub use state::State;
pub use stepper::{enforce_boundary, fixed_dt, Forcing, Stepper};

use apev_geometry::GeometryError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Law(#[from] LawError),
    #[error("non-positive density {value:.3e} at node ({i1}, {i2}, {i3})")]
    Density { value: f64, i1: usize, i2: usize, i3: usize },
    #[error("numerical blowup: {field} is not finite at t = {t}")]
    Blowup { t: f64, field: &'static str },
}
