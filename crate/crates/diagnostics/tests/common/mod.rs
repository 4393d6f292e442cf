#![allow(dead_code)]

use apev_diagnostics::JetWindow;
use apev_discretization::Grid;
use apev_geometry::HarmonicExtension;
use apev_initdata::families::Family;
use apev_solver::{PressureLaw, SolverError, State, Stepper};

/// Bump-family run with `dt = h₃/2`, returning the window centered at `t_center`.
pub fn bump_window(g: &Grid, delta: f64, t_center: f64, len: usize) -> JetWindow {
    let ext = HarmonicExtension::new(g);
    let d = Family::Bump.build(g, delta, 1.0);
    let s0 = State::new(g, &ext, 0.0, d.v0, d.r0, d.w0, d.w1).unwrap();
    let dt = 0.5 * g.h3;
    let steps = (t_center / dt).round() as usize + len / 2;
    let mut win = JetWindow::new(len, dt);
    Stepper::new(g, &ext, PressureLaw::default())
        .integrate::<SolverError>(&s0, dt, steps, |s, _| {
            win.push(s.clone());
            Ok(())
        })
        .unwrap();
    win
}

pub fn steady_window(g: &Grid, len: usize) -> JetWindow {
    let ext = HarmonicExtension::new(g);
    let st = Stepper::new(g, &ext, PressureLaw::default());
    let dt = st.cfl_dt(&State::steady(g, 1.0), 0.5);
    let mut win = JetWindow::new(len, dt);
    st.integrate::<SolverError>(&State::steady(g, 1.0), dt, len - 1, |s, _| {
        win.push(s.clone());
        Ok(())
    })
    .unwrap();
    win
}
