mod common;

use apev_diagnostics::kinematics::transport;
use apev_diagnostics::*;
use apev_discretization::{norms::l2_quadrature, Grid, Side};
use apev_geometry::HarmonicExtension;
use apev_initdata::families::Family;
use apev_solver::{PressureLaw, SolverError, State, Stepper};
use common::{bump_window, steady_window};

#[test]
fn steady_trajectory_has_identically_zero_residuals() {
    let g = Grid::new(8, 8, 17).unwrap();
    let win = steady_window(&g, 5);
    let law = PressureLaw::default();
    assert_eq!(g_equation_residual(&g, &law, &win).unwrap().norms(&g), (0.0, 0.0, 0.0));
    let (z, r) = vorticity_and_residual(&g, &win).unwrap();
    assert!(z.iter().chain(&r).all(|f| f.max_abs() == 0.0));
    assert_eq!(divergence_identity_residual(&g, &win).unwrap().max_abs(), 0.0);
    assert_eq!(tangency_residual(&g, win.center().unwrap()), (0.0, 0.0));
}

#[test]
fn tangency_after_every_step_and_kinematic_link() {
    let g = Grid::new(16, 16, 33).unwrap();
    let ext = HarmonicExtension::new(&g);
    let d = Family::Bump.build(&g, 1e-3, 1.0);
    let s0 = State::new(&g, &ext, 0.0, d.v0, d.r0, d.w0, d.w1).unwrap();
    let st = Stepper::new(&g, &ext, PressureLaw::default());
    let dt = st.cfl_dt(&s0, 0.5);
    st.integrate::<SolverError>(&s0, dt, 40, |s, _| {
        let (lo, hi) = tangency_residual(&g, s);
        assert!(lo <= 1e-12 && hi <= 1e-10, "({lo}, {hi}) at t = {}", s.t);
        // J·W = b₃ᵢvᵢ − w_t on Γ₁.
        let jw = &g.trace(&s.maps.jac, Side::Top) * &g.trace(&transport(s)[2], Side::Top);
        assert!((&jw - &s.kinematic_residual(&g)).max_abs() <= 1e-16);
        Ok(())
    })
    .unwrap();
}

#[test]
fn extension_of_h_matches_its_boundary_formula() {
    let g = Grid::new(16, 16, 33).unwrap();
    let ext = HarmonicExtension::new(&g);
    let win = bump_window(&g, 0.05, 0.5, 5);
    let s = win.center().unwrap();
    let h_int = h_extension(&g, &ext, &win).unwrap();
    let w_tt = win.d_boundary(1, |x| x.w_t.clone()).unwrap();
    let h_top = h_boundary(&g, s, &w_tt);
    let scale = h_top.max_abs();
    assert!(scale > 0.0);
    assert!((&g.trace(&h_int, Side::Top) - &h_top).max_abs() <= 1e-13 * scale.max(1.0));
}

#[test]
fn transport_form_of_the_continuity_residual_agrees() {
    let g = Grid::new(16, 16, 65).unwrap();
    let win = bump_window(&g, 0.01, 0.5, 5);
    let div = divergence_identity_residual(&g, &win).unwrap();
    let qg = qg_residual(&g, &win).unwrap();
    let (a, b) = (l2_quadrature(&g, &div), l2_quadrature(&g, &(&qg - &div)));
    assert!(b <= 1e-2 * a, "difference {b} against residual {a}");
}

#[test]
fn g_equation_and_vorticity_residuals_converge() {
    let law = PressureLaw::default();
    let measure = |n3: usize| {
        let g = Grid::new(16, 16, n3).unwrap();
        let win = bump_window(&g, 0.01, 0.5, 5);
        let (i, t, b) = g_equation_residual(&g, &law, &win).unwrap().norms(&g);
        let (_, vr) = vorticity_and_residual(&g, &win).unwrap();
        let v = vr.iter().map(|f| l2_quadrature(&g, f).powi(2)).sum::<f64>().sqrt();
        [i, t, b, v]
    };
    let (c, f) = (measure(65), measure(129));
    for (k, name) in ["interior", "Γ₁", "Γ₀", "vorticity"].iter().enumerate() {
        assert!(c[k] / f[k] >= 8.0, "{name}: {} -> {}", c[k], f[k]);
    }
}
