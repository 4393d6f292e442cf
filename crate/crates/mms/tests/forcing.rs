use apev_discretization::{Grid, ScalarField};
use apev_geometry::HarmonicExtension;
use apev_mms::{CaseName, MmsCase};
use apev_solver::Stepper;

/// Max over nodes of `rhs(exact) − ∂ₜ(exact)` for the fluid, and the same for the plate.
fn residuals(case: &MmsCase, n: usize, n3: usize, t: f64) -> (f64, f64) {
    let g = Grid::new(n, n, n3).unwrap();
    let ext = HarmonicExtension::new(&g);
    let s = case.exact_state(&g, &ext, t).unwrap();
    let (dv, dr, wtt) = Stepper::new(&g, &ext, case.law).with_forcing(case).rhs(&s).unwrap();
    let (ev, er, ewtt) = case.exact_rates(&g, t);
    let fluid = dv.iter().zip(&ev).map(|(a, b)| (a - b).max_abs()).chain([(&dr - &er).max_abs()]).fold(0.0, f64::max);
    (fluid, (&wtt - &ewtt).max_abs())
}

#[test]
fn plate_forcing_is_exact_at_every_node() {
    for name in CaseName::ALL {
        let c = MmsCase::new(name);
        for t in [0.0, 0.37, 1.2] {
            let (_, plate) = residuals(&c, 16, 17, t);
            assert!(plate <= 1e-13, "{name} at t = {t}: {plate}");
        }
    }
}

#[test]
fn fluid_forcing_is_consistent_to_truncation_order() {
    for (name, n) in [(CaseName::Frozen, 32), (CaseName::Coupled, 16)] {
        let c = MmsCase::new(name);
        let e: Vec<f64> = [17, 33, 65].iter().map(|&n3| residuals(&c, n, n3, 0.3).0).collect();
        for w in e.windows(2) {
            assert!((w[0] / w[1]).log2() >= 3.5, "{name}: {e:?}");
        }
    }
}

#[test]
fn frozen_fluid_case_leaves_fluid_rates_zero() {
    let c = MmsCase::new(CaseName::Plate);
    let g = Grid::new(8, 8, 9).unwrap();
    let ext = HarmonicExtension::new(&g);
    let s = c.exact_state(&g, &ext, 0.5).unwrap();
    let (dv, dr, _) = Stepper::new(&g, &ext, c.law).with_forcing(&c).rhs(&s).unwrap();
    assert!(dv.iter().chain([&dr]).all(|f: &ScalarField| f.max_abs() == 0.0));
}
