//! Recovery of a velocity field from its divergence, curl, normal traces and
//! horizontal means, one tangential Fourier mode at a time.

use std::collections::BTreeMap;

use apev_discretization::norms::interior_vector;
use apev_discretization::vertical::helmholtz_dirichlet;
use apev_discretization::{Grid, Side, VectorField};
use apev_solver::State;
use nalgebra::{DMatrix, DVector, LU, Dyn};
use num_complex::Complex64;

use crate::kinematics as kin;
use crate::monitor::a_minus_identity_h2;
use crate::DiagnosticsError;

/// Operators used to form the data `(d, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// Flat `div v`, `curl v`.
    Flat,
    /// `div_a v`, `curl_a v`: the mismatch with the flat solve scales with `‖a − I‖`.
    Ale,
}

/// Largest `‖a − I‖_{H²}` for which the reconstruction is attempted.
pub const A_LIMIT: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct DivCurl {
    pub v_hat: VectorField,
    /// `‖v − v̂‖_{L²}`
    pub l2: f64,
    /// `‖v − v̂‖_{H¹}`
    pub h1: f64,
    /// `‖a − I‖_{H²}` of the state.
    pub a_minus_i: f64,
}

type Column = Vec<Complex64>;

/// Per-mode vertical profiles of a field.
fn columns(grid: &Grid, f: &apev_discretization::ScalarField) -> Vec<Column> {
    let p = grid.plane_len();
    let mut out = vec![vec![Complex64::default(); grid.n3]; p];
    for i3 in 0..grid.n3 {
        let c = grid.planes().forward_normalized(grid.plane(f, i3));
        for (b, v) in c.into_iter().enumerate() {
            out[b][i3] = v;
        }
    }
    out
}

fn synthesize(grid: &Grid, cols: &[Column]) -> apev_discretization::ScalarField {
    let mut out = grid.zeros();
    let mut buf = vec![Complex64::default(); grid.plane_len()];
    for i3 in 0..grid.n3 {
        for (o, c) in buf.iter_mut().zip(cols) {
            *o = c[i3];
        }
        grid.planes().synthesize(&mut buf);
        for (o, v) in grid.plane_mut(&mut out, i3).iter_mut().zip(&buf) {
            *o = v.re;
        }
    }
    out
}

fn split_apply(f: impl Fn(&[f64]) -> Vec<f64>, c: &[Complex64]) -> Column {
    let re: Vec<f64> = c.iter().map(|z| z.re).collect();
    let im: Vec<f64> = c.iter().map(|z| z.im).collect();
    f(&re).into_iter().zip(f(&im)).map(|(a, b)| Complex64::new(a, b)).collect()
}

fn lu_solve(lu: &LU<f64, Dyn, Dyn>, rhs: &[Complex64]) -> Column {
    split_apply(
        |x| lu.solve(&DVector::from_column_slice(x)).expect("nonsingular vertical operator").as_slice().to_vec(),
        rhs,
    )
}

/// `D₂` on interior rows, `D₁` at the bottom row and the vertical mean in the
/// last row: `∂₃u = c` with prescribed `∫u dx₃`.
fn bordered(grid: &Grid) -> DMatrix<f64> {
    let n = grid.n3;
    let mut m = grid.second_stencil().to_dense();
    let d1 = grid.first_stencil().to_dense();
    for j in 0..n {
        m[(0, j)] = d1[(0, j)];
        m[(n - 1, j)] = grid.vertical_weights()[j];
    }
    m
}

/// Reconstructs `v̂` from `d`, `c`, `v₃|Γ₀`, `v₃|Γ₁` and the horizontal means
/// of `v₁, v₂`. Modes at the Nyquist wavenumber carry no derivative
/// information and are set to zero.
pub fn divcurl_reconstruct(grid: &Grid, state: &State, metric: Metric) -> Result<DivCurl, DiagnosticsError> {
    let a_minus_i = a_minus_identity_h2(grid, &state.maps)?;
    if a_minus_i > A_LIMIT {
        return Err(DiagnosticsError::MonitorNotGreen { value: a_minus_i, limit: A_LIMIT });
    }
    let v = &state.v;
    let (d, c) = match metric {
        Metric::Flat => (kin::div(grid, v), kin::curl(grid, v)),
        Metric::Ale => (kin::div_a(grid, &state.maps, v), kin::curl_a(grid, &state.maps, v)),
    };
    let dh = columns(grid, &d);
    let ch: [Vec<Column>; 3] = std::array::from_fn(|i| columns(grid, &c[i]));
    let v1 = columns(grid, &v[0]);
    let v2 = columns(grid, &v[1]);
    let v3 = columns(grid, &v[2]);

    let d1 = grid.first_stencil();
    let n = grid.n3;
    let weights = grid.vertical_weights();
    let mean = |col: &Column| -> Complex64 { col.iter().zip(weights).map(|(z, w)| z * *w).sum() };
    let mut cache: BTreeMap<u64, LU<f64, Dyn, Dyn>> = BTreeMap::new();
    let zero = vec![Complex64::default(); n];
    let mut out: [Vec<Column>; 3] = std::array::from_fn(|_| vec![zero.clone(); grid.plane_len()]);
    let (n1h, n2h) = (-(grid.n1 as f64) / 2.0, -(grid.n2 as f64) / 2.0);

    for b in 0..grid.plane_len() {
        let (k1, k2) = (grid.k1[b / grid.n2], grid.k2[b % grid.n2]);
        if k1 == n1h || k2 == n2h {
            continue;
        }
        let kappa = grid.kappa(b);
        let ddz = split_apply(|x| d1.apply(x), &dh[b]);
        let lu = cache.entry(kappa.round() as u64).or_insert_with(|| helmholtz_dirichlet(grid.second_stencil(), kappa).lu());
        let i = Complex64::i();
        let mut rhs: Column = (0..n).map(|j| ddz[j] - i * (k1 * ch[1][b][j] - k2 * ch[0][b][j])).collect();
        rhs[0] = v3[b][0];
        rhs[n - 1] = v3[b][n - 1];
        let w3 = lu_solve(lu, &rhs);
        if kappa == 0.0 {
            let lu0 = bordered(grid).lu();
            let solve_h = |src: Vec<Complex64>, m: Complex64| {
                let mut r = split_apply(|x| d1.apply(x), &src);
                r[0] = src[0];
                r[n - 1] = m;
                lu_solve(&lu0, &r)
            };
            out[0][b] = solve_h(ch[1][b].clone(), mean(&v1[b]));
            out[1][b] = solve_h(ch[0][b].iter().map(|z| -z).collect(), mean(&v2[b]));
        } else {
            let dw3 = split_apply(|x| d1.apply(x), &w3);
            for j in 0..n {
                let s = -i * (dh[b][j] - dw3[j]);
                let t = -i * ch[2][b][j];
                out[0][b][j] = (k1 * s - k2 * t) / kappa;
                out[1][b][j] = (k2 * s + k1 * t) / kappa;
            }
        }
        out[2][b] = w3;
    }
    let v_hat: VectorField = std::array::from_fn(|k| synthesize(grid, &out[k]));
    let diff: VectorField = std::array::from_fn(|k| &v[k] - &v_hat[k]);
    Ok(DivCurl { l2: interior_vector(grid, &diff, 0.0)?, h1: interior_vector(grid, &diff, 1.0)?, v_hat, a_minus_i })
}

/// Traces `v₃|Γ₀`, `v₃|Γ₁` of the reconstruction, which must reproduce the data.
pub fn normal_traces(grid: &Grid, v: &VectorField) -> (f64, f64) {
    (grid.trace(&v[2], Side::Bottom).max_abs(), grid.trace(&v[2], Side::Top).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shear_flow_is_recovered() {
        let g = Grid::new(16, 16, 33).unwrap();
        let mut s = State::steady(&g, 1.0);
        s.v = [g.scalar(|_, y, _| y.sin()), g.zeros(), g.zeros()];
        let r = divcurl_reconstruct(&g, &s, Metric::Flat).unwrap();
        assert!(r.l2 < 1e-12, "{}", r.l2);
    }

    #[test]
    fn vertical_shear_and_mean_flow_are_recovered() {
        let g = Grid::new(8, 8, 33).unwrap();
        let mut s = State::steady(&g, 1.0);
        s.v = [g.scalar(|_, _, z| 0.3 + z * z), g.scalar(|x, _, z| z.cos() * x.sin()), g.zeros()];
        let r = divcurl_reconstruct(&g, &s, Metric::Flat).unwrap();
        assert!(r.l2 < 1e-6, "{}", r.l2);
    }
}
