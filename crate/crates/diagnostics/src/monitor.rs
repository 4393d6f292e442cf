//! Range monitors and the a priori norm table.

use apev_discretization::norms::{self, interior};
use apev_discretization::{BoundaryField, Grid, NormError, ScalarField, VectorField};
use apev_geometry::{AleMaps, HarmonicExtension};
use apev_solver::{PressureLaw, State};

use crate::{DiagnosticsError, JetWindow};

/// Admissible range of `J`.
pub const J_BOUNDS: (f64, f64) = (0.5, 2.0);
/// Admissible `‖a − I‖_{H²}`.
pub const A_EPSILON: f64 = 0.1;

/// `‖a − I‖_{H²}`: only the third row differs from the identity.
pub fn a_minus_identity_h2(grid: &Grid, maps: &AleMaps) -> Result<f64, NormError> {
    let a33 = &maps.a3[2] + -1.0;
    let sq = [&maps.a3[0], &maps.a3[1], &a33]
        .into_iter()
        .map(|f| interior(grid, f, 2.0).map(|n| n * n))
        .sum::<Result<f64, _>>()?;
    Ok(sq.sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormEntry {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct MonitorReport {
    pub t: f64,
    pub j_min: f64,
    pub j_max: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub qprime_min: f64,
    pub qprime_max: f64,
    pub a_minus_i_h2: f64,
    /// `max |b₃ᵢvᵢ − w_t|` on Γ₁.
    pub kinematic_residual: f64,
    pub norms: Vec<NormEntry>,
}

impl MonitorReport {
    /// Names of the monitors outside their admissible range.
    pub fn tripped(&self, law: &PressureLaw) -> Vec<&'static str> {
        let (rlo, rhi) = law.range();
        let (c1, c2) = law.q1_bounds();
        let mut out = Vec::new();
        let inside = |lo: f64, hi: f64, a: f64, b: f64| a >= lo && b <= hi;
        if !inside(J_BOUNDS.0, J_BOUNDS.1, self.j_min, self.j_max) {
            out.push("J");
        }
        if !inside(rlo, rhi, self.r_min, self.r_max) {
            out.push("R");
        }
        if !inside(c1, c2, self.qprime_min, self.qprime_max) {
            out.push("qprime");
        }
        if !(self.a_minus_i_h2 <= A_EPSILON) {
            out.push("a_minus_I");
        }
        out
    }

    pub fn is_green(&self, law: &PressureLaw) -> bool {
        self.tripped(law).is_empty()
    }

    pub fn norm(&self, name: &str) -> Option<f64> {
        self.norms.iter().find(|e| e.name == name).map(|e| e.value)
    }

    pub fn header() -> Vec<String> {
        ["t", "J_min", "J_max", "R_min", "R_max", "qprime_min", "qprime_max", "a_minus_I_H2", "kinematic_residual"]
            .map(String::from)
            .to_vec()
    }

    pub fn row(&self) -> Vec<f64> {
        vec![
            self.t,
            self.j_min,
            self.j_max,
            self.r_min,
            self.r_max,
            self.qprime_min,
            self.qprime_max,
            self.a_minus_i_h2,
            self.kinematic_residual,
        ]
    }
}

/// Nodes `(i1, i2, i3)` where `J` leaves [`J_BOUNDS`].
pub fn j_offenders(grid: &Grid, maps: &AleMaps) -> Vec<(usize, usize, usize)> {
    let p = grid.plane_len();
    maps.jac
        .data
        .iter()
        .enumerate()
        .filter(|(_, &j)| !(J_BOUNDS.0..=J_BOUNDS.1).contains(&j))
        .map(|(i, _)| ((i % p) / grid.n2, i % grid.n2, i / p))
        .collect()
}

/// Time derivatives available for the norm table; each list starts at order 0.
pub struct Derivatives<'a> {
    pub v: &'a [VectorField],
    pub r: &'a [ScalarField],
    pub w: &'a [BoundaryField],
}

/// The norms `‖∂ₜʲv‖_{H^{3−j}}`, `‖∂ₜʲR‖_{H^{3−j}}`, `‖∂ₜʲw‖_{H^{5−j}(Γ₁)}`
/// and `‖∂ₜʲ(ψ − x₃)‖_{H^{5.5−j}}` with `∂ₜʲψ = E(∂ₜʲw)`, for the orders present.
pub fn norm_table(grid: &Grid, ext: &HarmonicExtension, d: &Derivatives<'_>) -> Result<Vec<NormEntry>, DiagnosticsError> {
    let mut out = Vec::new();
    let mut push = |name: String, value: f64| out.push(NormEntry { name, value });
    for (j, v) in d.v.iter().enumerate().take(4) {
        push(format!("v_t{j}_H{}", 3 - j), norms::interior_vector(grid, v, (3 - j) as f64)?);
    }
    for (j, r) in d.r.iter().enumerate().take(4) {
        push(format!("R_t{j}_H{}", 3 - j), interior(grid, r, (3 - j) as f64)?);
    }
    for (j, w) in d.w.iter().enumerate().take(5) {
        let s = 5.0 - j as f64;
        push(format!("w_t{j}_H{s}"), norms::boundary(grid, w, s)?);
    }
    for (j, w) in d.w.iter().enumerate().take(4) {
        let s = 5.5 - j as f64;
        push(format!("psi_t{j}_H{s}"), interior(grid, &ext.extend(grid, w)?, s)?);
    }
    Ok(out)
}

/// Range checks at a state and, when a full window is supplied, the norm table
/// with time derivatives from it (otherwise only the order-0 entries).
pub fn monitor(
    grid: &Grid,
    ext: &HarmonicExtension,
    law: &PressureLaw,
    state: &State,
    window: Option<&JetWindow>,
) -> Result<MonitorReport, DiagnosticsError> {
    let q1 = state.r.map(|x| law.dq(x, 1));
    let (v, r, w) = match window {
        Some(win) => {
            let top = (win.len() / 2).min(3);
            let (mut v, mut r) = (Vec::new(), Vec::new());
            let mut w = vec![win.d_boundary(0, |s| s.w.clone())?];
            for j in 0..=top {
                v.push([win.d(j, |s| s.v[0].clone())?, win.d(j, |s| s.v[1].clone())?, win.d(j, |s| s.v[2].clone())?]);
                r.push(win.d(j, |s| s.r.clone())?);
                w.push(win.d_boundary(j, |s| s.w_t.clone())?);
            }
            (v, r, w)
        }
        None => (vec![state.v.clone()], vec![state.r.clone()], vec![state.w.clone()]),
    };
    let norms = norm_table(grid, ext, &Derivatives { v: &v, r: &r, w: &w })?;
    Ok(MonitorReport {
        t: state.t,
        j_min: state.maps.jac.min(),
        j_max: state.maps.jac.max(),
        r_min: state.r.min(),
        r_max: state.r.max(),
        qprime_min: q1.min(),
        qprime_max: q1.max(),
        a_minus_i_h2: a_minus_identity_h2(grid, &state.maps)?,
        kinematic_residual: state.kinematic_residual(grid).max_abs(),
        norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use apev_geometry::ale_coefficients;

    #[test]
    fn steady_state_is_green() {
        let g = Grid::new(8, 8, 9).unwrap();
        let ext = HarmonicExtension::new(&g);
        let law = PressureLaw::default();
        let s = State::steady(&g, 1.0);
        let m = monitor(&g, &ext, &law, &s, None).unwrap();
        assert_eq!((m.j_min, m.j_max, m.r_min, m.r_max, m.a_minus_i_h2), (1.0, 1.0, 1.0, 1.0, 0.0));
        assert!(m.is_green(&law));
        assert_eq!(m.norm("v_t0_H3"), Some(0.0));
        assert_eq!(m.norm("w_t0_H5"), Some(0.0));
    }

    #[test]
    fn compressed_cell_trips_the_jacobian_monitor_at_its_nodes() {
        let g = Grid::new(8, 8, 33).unwrap();
        let law = PressureLaw::default();
        // J = 1 + 0.6 cos x₁ cos 2πx₃ reaches 0.4.
        let tau = 2.0 * std::f64::consts::PI;
        let psi = g.scalar(|x, _, z| z + 0.6 * x.cos() * (tau * z).sin() / tau);
        let maps = ale_coefficients(&g, &psi, &g.zeros()).unwrap();
        let bad = j_offenders(&g, &maps);
        let expect: Vec<(usize, usize, usize)> = (0..g.n3)
            .flat_map(|i3| (0..g.n1).flat_map(move |i1| (0..g.n2).map(move |i2| (i1, i2, i3))))
            .filter(|&(i1, i2, i3)| maps.jac.data[g.index(i1, i2, i3)] < 0.5)
            .collect();
        assert!(bad.contains(&(4, 0, 0)) && bad.contains(&(4, 7, 32)));
        assert_eq!(bad, expect);
        let mut s = State::steady(&g, 1.0);
        s.maps = maps;
        let m = monitor(&g, &HarmonicExtension::new(&g), &law, &s, None).unwrap();
        assert!((m.j_min - 0.4).abs() < 1e-3, "{}", m.j_min);
        assert_eq!(m.tripped(&law), vec!["J", "a_minus_I"]);
    }
}
