//! Discretization of the periodic channel `T² × [0, 1]`.
//!
//! Tangential directions use Fourier collocation with period `2π`; the
//! vertical direction uses a uniform node set with fourth-order finite
//! differences. Interior fields are stored plane by plane (`x₃` slowest,
//! `x₂` fastest) so that every horizontal slice is a contiguous 2D array.

pub mod csv;
pub mod field;
pub mod grid;
pub mod norms;
pub mod quadrature;
pub mod snapshot;
pub mod spectral;
pub mod vertical;

pub use field::{BoundaryField, ScalarField, Side, VectorField};
pub use grid::{Grid, GridError};
pub use norms::{NormError, Region};
