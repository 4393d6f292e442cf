//! Sobolev norms on the channel and on its boundary tori.
//!
//! Boundary: `‖f‖²_{Hˢ} = 4π² Σ_k (1+|k|²)ˢ |f̂_k|²`.
//! Interior (anisotropic equivalent norm):
//! `‖f‖²_{Hˢ} = 4π² Σ_{j=0}^{⌊s⌋} Σ_k (1+|k|²)^{s−j} ∫₀¹ |∂₃ʲ f̂_k|² dx₃`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::field::{BoundaryField, ScalarField, Side};
use crate::grid::Grid;

/// Covers every interior norm used, including `ψ ∈ H^{5.5}`.
pub const MAX_INTERIOR_ORDER: f64 = 5.5;
/// Covers `w₀ ∈ H⁸(Γ₁)` in the initial energy functional.
pub const MAX_BOUNDARY_ORDER: f64 = 8.0;

#[derive(Debug, Error, PartialEq)]
pub enum NormError {
    #[error("unsupported Sobolev index s = {s} on {region:?} (allowed 0 ≤ s ≤ {max})")]
    Unsupported { s: f64, region: Region, max: f64 },
    #[error("field has {got} values, grid expects {expected}")]
    Shape { got: usize, expected: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Omega,
    Gamma0,
    Gamma1,
}

impl From<Side> for Region {
    fn from(s: Side) -> Self {
        match s {
            Side::Bottom => Region::Gamma0,
            Side::Top => Region::Gamma1,
        }
    }
}

fn weighted_power(grid: &Grid, plane: &[f64], s: f64) -> f64 {
    grid.planes()
        .forward_normalized(plane)
        .iter()
        .enumerate()
        .map(|(b, c)| (1.0 + grid.kappa(b)).powf(s) * c.norm_sqr())
        .sum()
}

/// Interior norm `‖f‖_{Hˢ(Ω)}`, `0 ≤ s ≤ 5.5`.
pub fn interior(grid: &Grid, f: &ScalarField, s: f64) -> Result<f64, NormError> {
    if !(0.0..=MAX_INTERIOR_ORDER).contains(&s) {
        return Err(NormError::Unsupported { s, region: Region::Omega, max: MAX_INTERIOR_ORDER });
    }
    if f.len() != grid.len() {
        return Err(NormError::Shape { got: f.len(), expected: grid.len() });
    }
    let mut total = 0.0;
    for j in 0..=(s.floor() as u32) {
        let g = grid.deriv_vertical(f, j);
        let mut acc = 0.0;
        for (i3, w) in grid.vertical_weights().iter().enumerate() {
            acc += w * weighted_power(grid, grid.plane(&g, i3), s - j as f64);
        }
        total += acc;
    }
    Ok((4.0 * PI * PI * total).sqrt())
}

/// Boundary norm `‖f‖_{Hˢ(Γ)}`, `0 ≤ s ≤ 8`.
pub fn boundary(grid: &Grid, f: &BoundaryField, s: f64) -> Result<f64, NormError> {
    if !(0.0..=MAX_BOUNDARY_ORDER).contains(&s) {
        return Err(NormError::Unsupported { s, region: f.side.into(), max: MAX_BOUNDARY_ORDER });
    }
    if f.len() != grid.plane_len() {
        return Err(NormError::Shape { got: f.len(), expected: grid.plane_len() });
    }
    Ok((4.0 * PI * PI * weighted_power(grid, &f.data, s)).sqrt())
}

/// `L²(Ω)` norm by physical-space quadrature.
pub fn l2_quadrature(grid: &Grid, f: &ScalarField) -> f64 {
    grid.integrate(&(f * f)).sqrt()
}

/// Sum of interior norms of the components.
pub fn interior_vector(grid: &Grid, v: &[ScalarField; 3], s: f64) -> Result<f64, NormError> {
    let mut sq = 0.0;
    for c in v {
        sq += interior(grid, c, s)?.powi(2);
    }
    Ok(sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_norms_match_closed_forms() {
        let g = Grid::new(16, 16, 17).unwrap();
        let f = g.scalar(|x, _, _| x.sin());
        assert!((interior(&g, &f, 0.0).unwrap() - PI * 2f64.sqrt()).abs() < 1e-12);
        assert!((interior(&g, &f, 1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn constant_boundary_norm() {
        let g = Grid::new(8, 8, 9).unwrap();
        let one = g.boundary(Side::Top, |_, _| 1.0);
        assert!((boundary(&g, &one, 3.0).unwrap() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn parseval_matches_quadrature() {
        let g = Grid::new(8, 10, 13).unwrap();
        let f = g.scalar(|x, y, z| (x + y).sin() * z.exp() + (2.0 * y).cos() + 0.3);
        let a = interior(&g, &f, 0.0).unwrap();
        let b = l2_quadrature(&g, &f);
        assert!((a - b).abs() < 1e-12 * b);
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let g = Grid::new(8, 8, 9).unwrap();
        assert!(interior(&g, &g.zeros(), 6.0).is_err());
        assert!(boundary(&g, &g.boundary_zeros(Side::Top), 8.5).is_err());
        assert!(boundary(&g, &g.boundary_zeros(Side::Top), -0.5).is_err());
        assert_eq!(interior(&g, &g.zeros(), 2.0).unwrap(), 0.0);
    }
}
