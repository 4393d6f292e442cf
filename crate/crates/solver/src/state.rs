use apev_discretization::{BoundaryField, Grid, ScalarField, Side, VectorField};
use apev_geometry::{AleMaps, HarmonicExtension};

use crate::SolverError;

/// Fluid and plate unknowns at one time level, with the geometry they induce.
#[derive(Clone, Debug)]
pub struct State {
    pub t: f64,
    pub v: VectorField,
    pub r: ScalarField,
    pub w: BoundaryField,
    pub w_t: BoundaryField,
    pub maps: AleMaps,
}

impl State {
    pub fn new(
        grid: &Grid,
        ext: &HarmonicExtension,
        t: f64,
        v: VectorField,
        r: ScalarField,
        w: BoundaryField,
        w_t: BoundaryField,
    ) -> Result<Self, SolverError> {
        let maps = AleMaps::from_plate(grid, ext, &w, &w_t)?;
        Ok(Self { t, v, r, w, w_t, maps })
    }

    /// `v = 0`, `R = R̄`, `w = w_t = 0`.
    pub fn steady(grid: &Grid, rbar: f64) -> Self {
        Self {
            t: 0.0,
            v: [grid.zeros(), grid.zeros(), grid.zeros()],
            r: grid.constant(rbar),
            w: grid.boundary_zeros(Side::Top),
            w_t: grid.boundary_zeros(Side::Top),
            maps: AleMaps::identity(grid),
        }
    }

    /// `b₃ᵢvᵢ − w_t` on Γ₁.
    pub fn kinematic_residual(&self, grid: &Grid) -> BoundaryField {
        let mut r = &self.maps.nu[2] * &grid.trace(&self.v[2], Side::Top);
        for i in 0..2 {
            r += &(&self.maps.nu[i] * &grid.trace(&self.v[i], Side::Top));
        }
        r -= &self.w_t;
        r
    }

    /// `∫_Ω J R`, the mass of the physical domain.
    pub fn mass(&self, grid: &Grid) -> f64 {
        grid.integrate(&(&self.maps.jac * &self.r))
    }

    /// The first non-finite unknown, if any.
    pub fn non_finite(&self) -> Option<&'static str> {
        let checks = [
            ("v1", self.v[0].all_finite()),
            ("v2", self.v[1].all_finite()),
            ("v3", self.v[2].all_finite()),
            ("R", self.r.all_finite()),
            ("w", self.w.all_finite()),
            ("w_t", self.w_t.all_finite()),
        ];
        checks.into_iter().find(|(_, ok)| !ok).map(|(n, _)| n)
    }
}
