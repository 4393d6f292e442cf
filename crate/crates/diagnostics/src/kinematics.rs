//! Pointwise ALE operators on a state with fresh maps.

use apev_discretization::{BoundaryField, Grid, ScalarField, Side, VectorField};
use apev_geometry::AleMaps;
use apev_solver::rhs::{self, Geometry};
use apev_solver::State;

/// `Σᵢ aᵢbᵢ`
pub fn dot(a: &[ScalarField; 3], b: &[ScalarField; 3]) -> ScalarField {
    let mut out = &a[0] * &b[0];
    out += &(&a[1] * &b[1]);
    out += &(&a[2] * &b[2]);
    out
}

/// Transport velocity `U = (v₁, v₂, W)` with `W = (v − η_t)ᵢa₃ᵢ`.
pub fn transport(s: &State) -> VectorField {
    let w = rhs::vertical_transport(&s.v, &Geometry::of(&s.maps), s.maps.a33());
    [s.v[0].clone(), s.v[1].clone(), w]
}

/// `∇_a f`
pub fn grad_a(grid: &Grid, maps: &AleMaps, f: &ScalarField) -> VectorField {
    rhs::grad_a(&grid.grad(f), &Geometry::of(maps), maps.a33())
}

/// `a_{ki}∂ₖXᵢ`
pub fn div_a(grid: &Grid, maps: &AleMaps, x: &VectorField) -> ScalarField {
    let gx = [grid.grad(&x[0]), grid.grad(&x[1]), grid.grad(&x[2])];
    rhs::div_a(&gx, &Geometry::of(maps), maps.a33())
}

/// `∇_a vₖ` for each component, indexed `[k][i]`.
pub fn jacobian_a(grid: &Grid, maps: &AleMaps, v: &VectorField) -> [VectorField; 3] {
    std::array::from_fn(|k| grad_a(grid, maps, &v[k]))
}

/// `ζᵢ = ε_{ijk}a_{mj}∂ₘvₖ`
pub fn curl_a(grid: &Grid, maps: &AleMaps, v: &VectorField) -> VectorField {
    curl_from(&jacobian_a(grid, maps, v))
}

/// Flat `curl v`.
pub fn curl(grid: &Grid, v: &VectorField) -> VectorField {
    curl_from(&[grid.grad(&v[0]), grid.grad(&v[1]), grid.grad(&v[2])])
}

/// Flat `div v`.
pub fn div(grid: &Grid, v: &VectorField) -> ScalarField {
    let mut d = grid.deriv(&v[0], 1);
    d += &grid.deriv(&v[1], 2);
    d += &grid.dz(&v[2]);
    d
}

fn curl_from(j: &[VectorField; 3]) -> VectorField {
    [&j[2][1] - &j[1][2], &j[0][2] - &j[2][0], &j[1][0] - &j[0][1]]
}

/// `∂ₜ` of the third row of `a`, from `∂ₜψ = ψ_t`:
/// `∂ₜ(1/J) = −∂₃ψ_t/J²`, `∂ₜ(−∂ⱼψ/J) = −∂ⱼψ_t/J + ∂ⱼψ ∂₃ψ_t/J²`.
pub fn a3_rate(grid: &Grid, maps: &AleMaps) -> VectorField {
    let inv = maps.a33();
    let dpt = grid.grad(&maps.psi_t);
    let s = &(&dpt[2] * inv) * inv;
    let row = |j: usize| {
        let mut r = &(&dpt[j] * inv) * -1.0;
        r += &(&maps.dpsi[j] * &s);
        r
    };
    [row(0), row(1), -&s]
}

/// `∂ₜb₃ = (−∂₁ψ_t, −∂₂ψ_t, 0)`.
pub fn b3_rate(grid: &Grid, maps: &AleMaps) -> VectorField {
    let [d1, d2] = grid.grad_h(&maps.psi_t);
    [-&d1, -&d2, grid.zeros()]
}

/// Traces of the components of a vector field.
pub fn trace3(grid: &Grid, v: &VectorField, side: Side) -> [BoundaryField; 3] {
    std::array::from_fn(|i| grid.trace(&v[i], side))
}

/// `Σₖ Uₖ∂ₖf`
pub fn advect(grid: &Grid, u: &VectorField, f: &ScalarField) -> ScalarField {
    dot(u, &grid.grad(f))
}
