use apev_discretization::{Grid, ScalarField, Side};
use apev_geometry::HarmonicExtension;
use apev_solver::{fixed_dt, PressureLaw, SolverError, State, Stepper};

fn beta(z: f64) -> f64 {
    let s = z / 0.6;
    if s >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

fn symmetric_state(g: &Grid, ext: &HarmonicExtension, d: f64) -> State {
    let v = [
        g.scalar(|x, y, z| d * beta(z) * x.sin() * y.cos()),
        g.scalar(|x, y, z| d * beta(z) * x.cos() * y.sin()),
        g.scalar(|x, y, z| d * z * beta(z) * (x.cos() + (2.0 * y).sin())),
    ];
    let r = g.scalar(|x, y, z| 1.0 + d * beta(z) * (x.cos() + y.sin()));
    State::new(g, ext, 0.0, v, r, g.boundary_zeros(Side::Top), g.boundary_zeros(Side::Top)).unwrap()
}

/// `f(−x₁) − parity·f(x₁)` in max norm.
fn reflection_defect(g: &Grid, f: &[f64], parity: f64, planes: usize) -> f64 {
    let mut worst = 0.0f64;
    for i3 in 0..planes {
        for i1 in 0..g.n1 {
            let m1 = (g.n1 - i1) % g.n1;
            for i2 in 0..g.n2 {
                let a = f[(i3 * g.n1 + i1) * g.n2 + i2];
                let b = f[(i3 * g.n1 + m1) * g.n2 + i2];
                worst = worst.max((b - parity * a).abs());
            }
        }
    }
    worst
}

#[test]
fn steady_state_is_preserved() {
    let g = Grid::new(8, 8, 17).unwrap();
    let ext = HarmonicExtension::new(&g);
    let st = Stepper::new(&g, &ext, PressureLaw::default());
    let s0 = State::steady(&g, 1.0);
    let dt = st.cfl_dt(&s0, 0.5);
    let end = st.integrate::<SolverError>(&s0, dt, 200, |_, _| Ok(())).unwrap();
    assert!(end.v.iter().all(|f| f.max_abs() == 0.0));
    assert_eq!((&end.r + -1.0).max_abs(), 0.0);
    assert_eq!(end.w.max_abs(), 0.0);
    assert_eq!(end.w_t.max_abs(), 0.0);
}

#[test]
fn reflection_symmetry_is_preserved() {
    let g = Grid::new(16, 8, 17).unwrap();
    let ext = HarmonicExtension::new(&g);
    let st = Stepper::new(&g, &ext, PressureLaw::default());
    let s0 = symmetric_state(&g, &ext, 1e-2);
    let dt = st.cfl_dt(&s0, 0.5);
    let end = st.integrate::<SolverError>(&s0, dt, 100, |_, _| Ok(())).unwrap();
    // Roundoff relative to the O(1) density, accumulated over 100 steps.
    let tol = 1e-13;
    assert!(reflection_defect(&g, &end.v[0].data, -1.0, g.n3) < tol);
    assert!(reflection_defect(&g, &end.v[1].data, 1.0, g.n3) < tol);
    assert!(reflection_defect(&g, &end.v[2].data, 1.0, g.n3) < tol);
    assert!(reflection_defect(&g, &end.r.data, 1.0, g.n3) < tol);
    assert!(reflection_defect(&g, &end.w.data, 1.0, 1) < tol);
    assert!(end.w.max_abs() > 0.0);
}

#[test]
fn boundary_conditions_hold_after_every_step() {
    let g = Grid::new(16, 16, 17).unwrap();
    let ext = HarmonicExtension::new(&g);
    let st = Stepper::new(&g, &ext, PressureLaw::default());
    let s0 = symmetric_state(&g, &ext, 1e-2);
    let (dt, n) = fixed_dt(0.3, st.cfl_dt(&s0, 0.5));
    let m0 = s0.mass(&g);
    let mut worst = (0.0f64, 0.0f64);
    let end = st
        .integrate::<SolverError>(&s0, dt, n, |s, _| {
            worst.0 = worst.0.max(g.trace(&s.v[2], Side::Bottom).max_abs());
            worst.1 = worst.1.max(s.kinematic_residual(&g).max_abs());
            Ok(())
        })
        .unwrap();
    assert_eq!(worst.0, 0.0);
    assert!(worst.1 < 1e-15);
    assert!((end.t - 0.3).abs() < 1e-14);
    assert!(((end.mass(&g) - m0) / m0).abs() < 1e-6);
    assert!(end.w.max_abs() > 0.0);
}

#[test]
fn rhs_vanishes_at_rest_and_reports_bad_density() {
    let g = Grid::new(8, 8, 9).unwrap();
    let ext = HarmonicExtension::new(&g);
    let st = Stepper::new(&g, &ext, PressureLaw::default());
    let (dv, dr, wtt) = st.rhs(&State::steady(&g, 1.0)).unwrap();
    assert!(dv.iter().all(|f| f.max_abs() == 0.0) && dr.max_abs() == 0.0 && wtt.max_abs() == 0.0);
    let mut s = State::steady(&g, 1.0);
    s.r.data[g.index(1, 2, 3)] = -0.5;
    assert_eq!(st.rhs(&s).unwrap_err(), SolverError::Density { value: -0.5, i1: 1, i2: 2, i3: 3 });
    s.r = ScalarField::constant(g.len(), f64::NAN);
    assert!(st.step(&s, 0.01).is_err());
}

