//! Initial data: the time-derivative jet at `t = 0`, the initial energy, and
//! the built-in data families.
//!
//! The jet is obtained by evaluating the fluid right-hand side on truncated
//! time-Taylor series (`c_{k+1} = RHS_k/(k+1)`) with the geometry series
//! extended from the plate coefficients, and by the plate recurrence
//! `(j+2)(j+1)W_{j+2} = −Δ_h²W_j + (j+1)Δ_h W_{j+1} + Q_j`, where `Q_j` are
//! the Taylor coefficients of `q(R)|Γ₁`.

pub mod families;
mod series;

pub use series::Series;

use apev_discretization::{norms, BoundaryField, Grid, NormError, ScalarField, Side, VectorField};
use apev_geometry::{AleMaps, GeometryError, HarmonicExtension};
use apev_solver::rhs::{fluid_rhs, Geometry};
use apev_solver::{FieldAlgebra, PressureLaw};
use thiserror::Error;

/// Highest time derivative of `(v, R)` in the jet.
pub const FLUID_DEPTH: usize = 3;
/// Highest time derivative of `w` in the jet.
pub const PLATE_DEPTH: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum InitError {
    #[error("initial density {value:.6e} outside [m0, M0] = [{m0}, {big_m0}] at node ({i1}, {i2}, {i3})")]
    Density { value: f64, m0: f64, big_m0: f64, i1: usize, i2: usize, i3: usize },
    #[error("kinematic incompatibility: ‖w1 − b3·v0‖ = {residual:.3e} exceeds {tolerance:.3e}")]
    Incompatible { residual: f64, tolerance: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// `∂ₜʲv(0)`, `∂ₜʲR(0)` for `j ≤ 3` and `∂ₜʲw(0)` for `j ≤ 4`.
#[derive(Clone, Debug)]
pub struct InitialJet {
    pub v: Vec<VectorField>,
    pub r: Vec<ScalarField>,
    pub w: Vec<BoundaryField>,
    pub psi0: ScalarField,
    pub psi_t0: ScalarField,
}

fn factorial(n: usize) -> f64 {
    (1..=n).product::<usize>() as f64
}

/// Builds the compatible jet of `(v₀, R₀, w₀, w₁)`.
#[allow(clippy::too_many_arguments)]
pub fn build_jet(
    grid: &Grid,
    ext: &HarmonicExtension,
    law: &PressureLaw,
    v0: &VectorField,
    r0: &ScalarField,
    w0: &BoundaryField,
    w1: &BoundaryField,
) -> Result<InitialJet, InitError> {
    if let Some(i) = r0.data.iter().position(|x| !(law.m0..=law.big_m0).contains(x)) {
        let p = grid.plane_len();
        return Err(InitError::Density {
            value: r0.data[i],
            m0: law.m0,
            big_m0: law.big_m0,
            i1: (i % p) / grid.n2,
            i2: i % grid.n2,
            i3: i / p,
        });
    }
    let maps0 = AleMaps::from_plate(grid, ext, w0, w1)?;
    check_kinematic(grid, &maps0, v0, w1)?;

    // Taylor coefficients.
    let mut cw = vec![w0.clone(), w1.clone()];
    let mut cv: Vec<VectorField> = vec![v0.clone()];
    let mut cr = vec![r0.clone()];
    let mut extended = Vec::new();
    for k in 0..FLUID_DEPTH {
        let rs = Series(cr.clone());
        let q = rs.compose(&|x, n| law.dq(x, n));
        let qk = grid.trace(&q.0[k], Side::Top);
        let mut next = grid.laplacian_h(&cw[k + 1]);
        next = &next * (k + 1) as f64;
        next -= &grid.bilaplacian_h(&cw[k]);
        next += &qk;
        cw.push(&next * (1.0 / ((k + 2) * (k + 1)) as f64));

        while extended.len() <= k + 1 {
            extended.push(ext.extend_with_derivatives(grid, &cw[extended.len()])?);
        }
        let coeffs = |f: &dyn Fn(usize) -> ScalarField| Series((0..=k).map(f).collect());
        let d1 = coeffs(&|j| extended[j].d[0].clone());
        let d2 = coeffs(&|j| extended[j].d[1].clone());
        let jac = coeffs(&|j| if j == 0 { &extended[0].d[2] + 1.0 } else { extended[j].d[2].clone() });
        let psi_t = coeffs(&|j| &extended[j + 1].value * (j + 1) as f64);
        let vs: [Series; 3] = std::array::from_fn(|i| Series(cv.iter().map(|c| c[i].clone()).collect()));
        let geo = Geometry { dpsi: [&d1, &d2], jac: &jac, psi_t: &psi_t };
        let (dv, dr) = fluid_rhs(grid, law, &vs, &rs, &geo);
        let s = 1.0 / (k + 1) as f64;
        cv.push(std::array::from_fn(|i| &dv[i].0[k] * s));
        cr.push(&dr.0[k] * s);
    }

    let psi0 = maps0.psi.clone();
    let psi_t0 = maps0.psi_t.clone();
    Ok(InitialJet {
        v: cv.iter().enumerate().map(|(j, c)| c.clone().map(|f| &f * factorial(j))).collect(),
        r: cr.iter().enumerate().map(|(j, c)| c * factorial(j)).collect(),
        w: cw.iter().enumerate().map(|(j, c)| c * factorial(j)).collect(),
        psi0,
        psi_t0,
    })
}

fn check_kinematic(grid: &Grid, maps: &AleMaps, v0: &VectorField, w1: &BoundaryField) -> Result<(), InitError> {
    let mut res = -w1;
    for i in 0..3 {
        res += &(&maps.nu[i] * &grid.trace(&v0[i], Side::Top));
    }
    let residual = norms::boundary(grid, &res, 0.0)?;
    let tolerance = 1e-10 * (1.0 + norms::interior_vector(grid, v0, 0.0)?);
    if residual > tolerance {
        return Err(InitError::Incompatible { residual, tolerance });
    }
    Ok(())
}

impl InitialJet {
    /// `‖∂ₜR(0)|Γ₁‖_{H²(Γ₁)}`, reported without a threshold.
    pub fn rt_trace_h2(&self, grid: &Grid) -> Result<f64, NormError> {
        norms::boundary(grid, &grid.trace(&self.r[1], Side::Top), 2.0)
    }
}

/// `E(0) = Σ_{j≤3}(‖∂ₜʲv‖²_{H^{3−j}} + ‖∂ₜʲR‖²_{H^{3−j}}) + Σ_{j≤4}‖∂ₜʲw‖²_{H^{8−2j}(Γ₁)}
/// + ‖R₀‖²_{H⁴(Γ₁)} + ‖∂ₜR(0)‖²_{H²(Γ₁)}`.
pub fn total_energy_e0(grid: &Grid, jet: &InitialJet) -> Result<f64, NormError> {
    let mut e = 0.0;
    for j in 0..=FLUID_DEPTH {
        let s = (3 - j) as f64;
        e += norms::interior_vector(grid, &jet.v[j], s)?.powi(2);
        e += norms::interior(grid, &jet.r[j], s)?.powi(2);
    }
    for j in 0..=PLATE_DEPTH {
        e += norms::boundary(grid, &jet.w[j], (8 - 2 * j) as f64)?.powi(2);
    }
    e += norms::boundary(grid, &grid.trace(&jet.r[0], Side::Top), 4.0)?.powi(2);
    e += jet.rt_trace_h2(grid)?.powi(2);
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn steady_jet_is_zero_and_energy_is_two_volumes() {
        let g = Grid::new(8, 8, 9).unwrap();
        let ext = HarmonicExtension::new(&g);
        let law = PressureLaw::default();
        let z = g.boundary_zeros(Side::Top);
        let v0 = [g.zeros(), g.zeros(), g.zeros()];
        let jet = build_jet(&g, &ext, &law, &v0, &g.constant(1.0), &z, &z).unwrap();
        assert_eq!(jet.v.len(), 4);
        assert_eq!(jet.w.len(), 5);
        for j in 1..=3 {
            assert!(jet.v[j].iter().all(|f| f.max_abs() == 0.0));
            assert_eq!(jet.r[j].max_abs(), 0.0);
        }
        assert!(jet.w.iter().all(|f| f.max_abs() == 0.0));
        let e0 = total_energy_e0(&g, &jet).unwrap();
        assert!((e0 - 8.0 * PI * PI).abs() < 1e-10);
    }

    #[test]
    fn first_derivatives_of_density_wave() {
        let g = Grid::new(16, 8, 9).unwrap();
        let ext = HarmonicExtension::new(&g);
        let law = PressureLaw::default();
        let z = g.boundary_zeros(Side::Top);
        let v0 = [g.zeros(), g.zeros(), g.zeros()];
        let r0 = g.scalar(|x, _, _| 1.0 + 0.01 * x.cos());
        let jet = build_jet(&g, &ext, &law, &v0, &r0, &z, &z).unwrap();
        assert_eq!(jet.r[1].max_abs(), 0.0);
        let expect = g.dealias(&g.scalar(|x, _, _| 0.01 * (1.0 + 0.01 * x.cos()).powf(law.gamma - 2.0) * x.sin()));
        assert!((&jet.v[1][0] - &expect).max_abs() < 1e-15);
        assert!(jet.v[1][1].max_abs() < 1e-15 && jet.v[1][2].max_abs() < 1e-15);
        // w_tt(0) = q(R₀)|Γ₁
        let q = g.boundary(Side::Top, |x, _| law.q(1.0 + 0.01 * x.cos()));
        assert!((&jet.w[2] - &q).max_abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_density_and_incompatible_plate_velocity() {
        let g = Grid::new(4, 4, 5).unwrap();
        let ext = HarmonicExtension::new(&g);
        let law = PressureLaw::default();
        let z = g.boundary_zeros(Side::Top);
        let v0 = [g.zeros(), g.zeros(), g.zeros()];
        assert!(matches!(
            build_jet(&g, &ext, &law, &v0, &g.constant(0.1), &z, &z),
            Err(InitError::Density { value, .. }) if value == 0.1
        ));
        let w1 = g.boundary(Side::Top, |x, _| 0.01 * x.cos());
        assert!(matches!(build_jet(&g, &ext, &law, &v0, &g.constant(1.0), &z, &w1), Err(InitError::Incompatible { .. })));
    }
}
