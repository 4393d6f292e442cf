use apev_discretization::{BoundaryField, Grid, ScalarField, Side};

use crate::{GeometryError, HarmonicExtension, DEGENERATE_J};

/// One entry of `a` or `b`: the structural zeros and ones are not stored.
#[derive(Clone, Copy, Debug)]
pub enum Entry<'a> {
    Zero,
    One,
    Field(&'a ScalarField),
}

impl Entry<'_> {
    pub fn to_field(self, grid: &Grid) -> ScalarField {
        match self {
            Entry::Zero => grid.zeros(),
            Entry::One => grid.constant(1.0),
            Entry::Field(f) => f.clone(),
        }
    }
}

/// Geometry bundle derived from `ψ` and `ψ_t`.
#[derive(Clone, Debug)]
pub struct AleMaps {
    pub psi: ScalarField,
    pub psi_t: ScalarField,
    /// `(∂₁ψ, ∂₂ψ)`
    pub dpsi: [ScalarField; 2],
    /// `J = ∂₃ψ`
    pub jac: ScalarField,
    /// Third row of `a`.
    pub a3: [ScalarField; 3],
    /// Third row of `b`: `(−∂₁ψ, −∂₂ψ, 1)`.
    pub b3: [ScalarField; 3],
    /// Moving normal on Γ₁.
    pub nu: [BoundaryField; 3],
}

impl AleMaps {
    /// The flat map `ψ = x₃`.
    pub fn identity(grid: &Grid) -> Self {
        let psi = grid.scalar(|_, _, z| z);
        assemble(grid, psi, grid.zeros(), [grid.zeros(), grid.zeros()], grid.constant(1.0))
            .expect("identity map is nondegenerate")
    }

    /// Geometry of the plate state `(w, w_t)`: `ψ = x₃ + E(w)`, `ψ_t = E(w_t)`,
    /// `J = 1 + D₁E(w)`.
    pub fn from_plate(
        grid: &Grid,
        ext: &HarmonicExtension,
        w: &BoundaryField,
        w_t: &BoundaryField,
    ) -> Result<Self, GeometryError> {
        let e = ext.extend_with_derivatives(grid, w)?;
        let psi_t = ext.extend(grid, w_t)?;
        let mut psi = e.value;
        for (p, z) in psi.data.iter_mut().zip(height(grid)) {
            *p += z;
        }
        let [d1, d2, d3] = e.d;
        let jac = &d3 + 1.0;
        assemble(grid, psi, psi_t, [d1, d2], jac)
    }

    /// `a_{ki}`, 1-based.
    pub fn a(&self, k: usize, i: usize) -> Entry<'_> {
        match (k, i) {
            (3, i) => Entry::Field(&self.a3[i - 1]),
            (k, i) if k == i => Entry::One,
            _ => Entry::Zero,
        }
    }

    /// `b_{ki}`, 1-based.
    pub fn b(&self, k: usize, i: usize) -> Entry<'_> {
        match (k, i) {
            (3, 3) => Entry::One,
            (3, i) => Entry::Field(&self.b3[i - 1]),
            (k, i) if k == i => Entry::Field(&self.jac),
            _ => Entry::Zero,
        }
    }

    pub fn a_matrix(&self, grid: &Grid) -> [[ScalarField; 3]; 3] {
        std::array::from_fn(|k| std::array::from_fn(|i| self.a(k + 1, i + 1).to_field(grid)))
    }

    pub fn b_matrix(&self, grid: &Grid) -> [[ScalarField; 3]; 3] {
        std::array::from_fn(|k| std::array::from_fn(|i| self.b(k + 1, i + 1).to_field(grid)))
    }

    /// `1/J`
    pub fn a33(&self) -> &ScalarField {
        &self.a3[2]
    }
}

fn height(grid: &Grid) -> impl Iterator<Item = f64> + '_ {
    grid.x3.iter().flat_map(move |&z| std::iter::repeat(z).take(grid.plane_len()))
}

fn assemble(
    grid: &Grid,
    psi: ScalarField,
    psi_t: ScalarField,
    dpsi: [ScalarField; 2],
    jac: ScalarField,
) -> Result<AleMaps, GeometryError> {
    let (imin, jmin) = jac
        .data
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv || v.is_nan() { (i, v) } else { (bi, bv) });
    if !(jmin >= DEGENERATE_J) {
        let p = grid.plane_len();
        return Err(GeometryError::Degenerate {
            j_min: jmin,
            threshold: DEGENERATE_J,
            i1: (imin % p) / grid.n2,
            i2: imin % grid.n2,
            i3: imin / p,
        });
    }
    let inv = jac.map(|j| 1.0 / j);
    let a3 = [&(&dpsi[0] * &inv) * -1.0, &(&dpsi[1] * &inv) * -1.0, inv];
    let b3 = [-&dpsi[0], -&dpsi[1], grid.constant(1.0)];
    let nu = [grid.trace(&b3[0], Side::Top), grid.trace(&b3[1], Side::Top), grid.trace(&b3[2], Side::Top)];
    Ok(AleMaps { psi, psi_t, dpsi, jac, a3, b3, nu })
}

/// Builds the maps from an arbitrary height function: `∂₁ψ, ∂₂ψ` spectral,
/// `J = D₁ψ`.
pub fn ale_coefficients(grid: &Grid, psi: &ScalarField, psi_t: &ScalarField) -> Result<AleMaps, GeometryError> {
    let [d1, d2, d3] = grid.grad(psi);
    assemble(grid, psi.clone(), psi_t.clone(), [d1, d2], d3)
}

/// `Σ_k D_k b_{ki}` for `i = 1, 2, 3`.
pub fn piola_residual(grid: &Grid, b: &[[ScalarField; 3]; 3]) -> [ScalarField; 3] {
    std::array::from_fn(|i| {
        let mut r = grid.deriv(&b[0][i], 1);
        r += &grid.deriv(&b[1][i], 2);
        r += &grid.dz(&b[2][i]);
        r
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_height_gives_identity() {
        let g = Grid::new(8, 8, 9).unwrap();
        let ext = HarmonicExtension::new(&g);
        let zero = g.boundary_zeros(Side::Top);
        let m = AleMaps::from_plate(&g, &ext, &zero, &zero).unwrap();
        let a = m.a_matrix(&g);
        let b = m.b_matrix(&g);
        for k in 0..3 {
            for i in 0..3 {
                let id = if k == i { 1.0 } else { 0.0 };
                assert!(a[k][i].data.iter().all(|&v| v == id));
                assert!(b[k][i].data.iter().all(|&v| v == id));
            }
        }
        assert!(m.jac.data.iter().all(|&v| v == 1.0));
        assert_eq!(m.psi, g.scalar(|_, _, z| z));
    }

    #[test]
    fn hand_differentiated_single_mode() {
        let g = Grid::new(16, 8, 33).unwrap();
        let s1 = 1f64.sinh();
        let psi = g.scalar(|x, _, z| z + 0.1 * x.cos() * z.sinh() / s1);
        let m = ale_coefficients(&g, &psi, &g.zeros()).unwrap();
        let jac = g.scalar(|x, _, z| 1.0 + 0.1 * x.cos() * z.cosh() / s1);
        let a31 = g.scalar(|x, _, z| {
            let d1 = -0.1 * x.sin() * z.sinh() / s1;
            -d1 / (1.0 + 0.1 * x.cos() * z.cosh() / s1)
        });
        assert!((&m.jac - &jac).max_abs() < 1e-6);
        assert!((&m.a3[0] - &a31).max_abs() < 1e-6);
    }

    #[test]
    fn degenerate_map_is_reported_at_its_node() {
        let g = Grid::new(4, 4, 9).unwrap();
        let psi = g.scalar(|_, _, z| 0.05 * z);
        match ale_coefficients(&g, &psi, &g.zeros()) {
            Err(GeometryError::Degenerate { j_min, .. }) => assert!((j_min - 0.05).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn normal_is_third_row_of_b_on_top() {
        let g = Grid::new(8, 8, 9).unwrap();
        let ext = HarmonicExtension::new(&g);
        let w = g.boundary(Side::Top, |x, y| 0.05 * (x - y).sin());
        let m = AleMaps::from_plate(&g, &ext, &w, &g.boundary_zeros(Side::Top)).unwrap();
        let dw = g.deriv_tangential_boundary(&w, 1, 1);
        assert!((&m.nu[0] + &dw).max_abs() < 1e-13);
        assert!(m.nu[2].data.iter().all(|&v| v == 1.0));
    }
}
