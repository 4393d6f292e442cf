mod common;

use apev_diagnostics::monitor;
use apev_discretization::Grid;
use apev_geometry::HarmonicExtension;
use apev_solver::PressureLaw;
use common::bump_window;

#[test]
fn small_data_run_stays_green_with_full_norm_table() {
    let g = Grid::new(16, 16, 33).unwrap();
    let ext = HarmonicExtension::new(&g);
    let law = PressureLaw::default();
    let win = bump_window(&g, 1e-3, 0.3, 7);
    let m = monitor(&g, &ext, &law, win.center().unwrap(), Some(&win)).unwrap();
    assert!(m.is_green(&law), "{:?}", m.tripped(&law));
    assert!((m.j_min - 1.0).abs() < 1e-2 && (m.r_max - 1.0).abs() < 1e-2);
    assert!(m.kinematic_residual <= 1e-14);
    let names: Vec<&str> = m.norms.iter().map(|e| e.name.as_str()).collect();
    for n in ["v_t3_H0", "R_t3_H0", "w_t0_H5", "w_t4_H1", "psi_t3_H2.5"] {
        assert!(names.contains(&n), "{n} missing from {names:?}");
    }
    assert!(m.norms.iter().all(|e| e.value.is_finite()));
}
