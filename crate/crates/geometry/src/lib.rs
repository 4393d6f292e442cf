//! ALE geometry of the plate-bounded channel.
//!
//! The physical domain below the plate graph `x₃ = 1 + w(x₁, x₂)` is pulled
//! back to `Ω = T² × [0, 1]` by `η(x) = (x₁, x₂, ψ(x))`, where `ψ` is the
//! harmonic extension of `1 + w` vanishing on the bottom. With `J = ∂₃ψ`,
//! `a = (∇η)⁻¹` has identity first two rows and third row
//! `(−∂₁ψ/J, −∂₂ψ/J, 1/J)`; the cofactor matrix is `b = J·a`.

mod extension;
mod maps;

pub use extension::{elliptic_ratio_probe, Extended, HarmonicExtension};
pub use maps::{ale_coefficients, piola_residual, AleMaps, Entry};

use thiserror::Error;

/// Maps with `J` below this value anywhere are treated as broken down.
pub const DEGENERATE_J: f64 = 0.1;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("boundary value is not finite at node {0}")]
    NonFinite(usize),
    #[error("boundary field has {got} values, grid expects {expected}")]
    Shape { got: usize, expected: usize },
    #[error("degenerate map: J = {j_min:.3e} < {threshold} at node ({i1}, {i2}, {i3})")]
    Degenerate { j_min: f64, threshold: f64, i1: usize, i2: usize, i3: usize },
    #[error("norm evaluation failed: {0}")]
    Norm(#[from] apev_discretization::NormError),
}
