use apev_diagnostics::{divcurl_reconstruct, DiagnosticsError, Metric};
use apev_discretization::{norms::interior_vector, Grid, Side};
use apev_geometry::HarmonicExtension;
use apev_solver::State;

#[test]
fn flat_exact_cases() {
    let g = Grid::new(64, 64, 65).unwrap();
    let mut s = State::steady(&g, 1.0);
    s.v = [g.scalar(|_, y, _| y.sin()), g.zeros(), g.zeros()];
    assert!(divcurl_reconstruct(&g, &s, Metric::Flat).unwrap().l2 <= 1e-12);
    // v = ∇(cos x₁ cosh x₃)
    s.v = [g.scalar(|x, _, z| -x.sin() * z.cosh()), g.zeros(), g.scalar(|x, _, z| x.cos() * z.sinh())];
    assert!(divcurl_reconstruct(&g, &s, Metric::Flat).unwrap().l2 <= 1e-6);
}

fn ale_state(g: &Grid, ext: &HarmonicExtension, delta: f64) -> State {
    let pi = std::f64::consts::PI;
    let v = [
        g.scalar(|x, y, z| delta * ((y + 0.3).sin() * (pi * z).cos() + 0.5 * (x - y).cos() * z)),
        g.scalar(|x, y, z| delta * (x.cos() * (1.0 + z * z) - 0.4 * (2.0 * y).sin())),
        g.scalar(|x, y, z| delta * (pi * z).sin() * (x + 2.0 * y).cos()),
    ];
    let w = g.boundary(Side::Top, |x, y| 0.5 * delta * x.cos() * y.cos());
    State::new(g, ext, 0.0, v, g.constant(1.0), w, g.boundary_zeros(Side::Top)).unwrap()
}

#[test]
fn ale_discrepancy_is_linear_in_the_metric_defect() {
    let g = Grid::new(16, 16, 65).unwrap();
    let ext = HarmonicExtension::new(&g);
    let pts: Vec<(f64, f64)> = [1e-4, 1e-3, 1e-2]
        .iter()
        .map(|&d| {
            let s = ale_state(&g, &ext, d);
            let r = divcurl_reconstruct(&g, &s, Metric::Ale).unwrap();
            (r.a_minus_i.ln(), (r.l2 / interior_vector(&g, &s.v, 1.0).unwrap()).ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope - 1.0).abs() <= 0.3, "slope {slope}");
}

#[test]
fn flat_reconstruction_error_decreases_under_refinement() {
    let err = |n3: usize| {
        let g = Grid::new(16, 16, n3).unwrap();
        let s = ale_state(&g, &HarmonicExtension::new(&g), 1e-2);
        divcurl_reconstruct(&g, &s, Metric::Flat).unwrap().l2
    };
    let (a, b) = (err(33), err(65));
    assert!(a / b > 8.0, "{a} -> {b}");
}

#[test]
fn large_metric_defect_voids_the_reconstruction() {
    let g = Grid::new(16, 16, 33).unwrap();
    let s = ale_state(&g, &HarmonicExtension::new(&g), 0.5);
    assert!(matches!(divcurl_reconstruct(&g, &s, Metric::Flat), Err(DiagnosticsError::MonitorNotGreen { .. })));
}
