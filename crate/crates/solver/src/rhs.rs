use apev_discretization::{BoundaryField, Grid};
use apev_geometry::AleMaps;

use crate::{FieldAlgebra, PressureLaw};

/// The geometric inputs of the fluid equations.
#[derive(Clone, Copy, Debug)]
pub struct Geometry<'a, A> {
    /// `(∂₁ψ, ∂₂ψ)`
    pub dpsi: [&'a A; 2],
    pub jac: &'a A,
    pub psi_t: &'a A,
}

impl<'a> Geometry<'a, apev_discretization::ScalarField> {
    pub fn of(maps: &'a AleMaps) -> Self {
        Self { dpsi: [&maps.dpsi[0], &maps.dpsi[1]], jac: &maps.jac, psi_t: &maps.psi_t }
    }
}

/// Contravariant vertical velocity `W = (v₃ − ∂₁ψ v₁ − ∂₂ψ v₂ − ψ_t)/J`,
/// i.e. `(v − η_t)ᵢ a₃ᵢ`.
pub fn vertical_transport<A: FieldAlgebra>(v: &[A; 3], geo: &Geometry<'_, A>, inv_j: &A) -> A {
    v[2].sub(&v[0].mul(geo.dpsi[0])).sub(&v[1].mul(geo.dpsi[1])).sub(geo.psi_t).mul(inv_j)
}

/// `∇_a f = (aₖᵢ ∂ₖ f)ᵢ` from the flat gradient.
pub fn grad_a<A: FieldAlgebra>(g: &[A; 3], geo: &Geometry<'_, A>, inv_j: &A) -> [A; 3] {
    let z = g[2].mul(inv_j);
    [g[0].sub(&geo.dpsi[0].mul(&z)), g[1].sub(&geo.dpsi[1].mul(&z)), z]
}

/// `aₖᵢ ∂ₖ vᵢ` from the flat gradients of the components.
pub fn div_a<A: FieldAlgebra>(gv: &[[A; 3]; 3], geo: &Geometry<'_, A>, inv_j: &A) -> A {
    let vert = gv[2][2].sub(&geo.dpsi[0].mul(&gv[0][2])).sub(&geo.dpsi[1].mul(&gv[1][2]));
    gv[0][0].add(&gv[1][1]).add(&vert.mul(inv_j))
}

/// Time derivatives `(∂ₜv, ∂ₜR)` of the ALE Euler system:
/// `∂ₜvᵢ = −(v − η_t)ⱼaₖⱼ∂ₖvᵢ − (q'(R)/R)aₖᵢ∂ₖR`,
/// `∂ₜR = −(v − η_t)ⱼaₖⱼ∂ₖR − R aₖᵢ∂ₖvᵢ`, both dealiased.
pub fn fluid_rhs<A: FieldAlgebra>(
    grid: &Grid,
    law: &PressureLaw,
    v: &[A; 3],
    r: &A,
    geo: &Geometry<'_, A>,
) -> ([A; 3], A) {
    let inv_j = geo.jac.recip();
    let w = vertical_transport(v, geo, &inv_j);
    let adv = |g: &[A; 3]| v[0].mul(&g[0]).add(&v[1].mul(&g[1])).add(&w.mul(&g[2]));
    let gv = [v[0].grad(grid), v[1].grad(grid), v[2].grad(grid)];
    let gr = r.grad(grid);
    let coef = r.compose(&|x, n| law.d_coefficient(x, n));
    let pr = grad_a(&gr, geo, &inv_j);
    let dv = std::array::from_fn(|i| adv(&gv[i]).add(&coef.mul(&pr[i])).scale(-1.0).dealias(grid));
    let dr = adv(&gr).add(&r.mul(&div_a(&gv, geo, &inv_j))).scale(-1.0).dealias(grid);
    (dv, dr)
}

/// `w_tt = −Δ_h²w + Δ_h w_t + q`, spectrally.
pub fn plate_rhs(grid: &Grid, w: &BoundaryField, w_t: &BoundaryField, q_trace: &BoundaryField) -> BoundaryField {
    let mut out = grid.laplacian_h(w_t);
    out -= &grid.bilaplacian_h(w);
    out += q_trace;
    out
}
