use apev_discretization::{BoundaryField, Grid};
use num_complex::Complex64;

/// Per-mode propagator `e^{Mτ}` of the linear plate operator
/// `M = [[0, 1], [−κ², −κ]]`, `κ = |k|²`, acting on `(w, w_t)`.
#[derive(Clone, Debug)]
pub struct PlatePropagator {
    tau: f64,
    entries: Vec<[f64; 4]>,
}

/// `e^{Mτ} = e^{−κτ/2}[cos(ωτ) I + sin(ωτ)/ω (M + κ/2 I)]`, `ω = κ√3/2`.
pub fn mode_exponential(kappa: f64, tau: f64) -> [f64; 4] {
    if kappa == 0.0 {
        return [1.0, tau, 0.0, 1.0];
    }
    let omega = kappa * 3f64.sqrt() / 2.0;
    let decay = (-0.5 * kappa * tau).exp();
    let (s, c) = (omega * tau).sin_cos();
    let sw = s / omega;
    let h = 0.5 * kappa;
    [decay * (c + sw * h), decay * sw, -decay * sw * kappa * kappa, decay * (c + sw * (h - kappa))]
}

impl PlatePropagator {
    pub fn new(grid: &Grid, tau: f64) -> Self {
        Self { tau, entries: (0..grid.plane_len()).map(|b| mode_exponential(grid.kappa(b), tau)).collect() }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Applies the propagator to `(w, w_t)` in place.
    pub fn apply(&self, grid: &Grid, w: &mut BoundaryField, w_t: &mut BoundaryField) {
        let fft = grid.planes();
        let mut a = fft.forward_normalized(&w.data);
        let mut b = fft.forward_normalized(&w_t.data);
        for ((x, y), e) in a.iter_mut().zip(b.iter_mut()).zip(&self.entries) {
            let (p, q): (Complex64, Complex64) = (*x, *y);
            *x = p * e[0] + q * e[1];
            *y = p * e[2] + q * e[3];
        }
        fft.synthesize(&mut a);
        fft.synthesize(&mut b);
        w.data.iter_mut().zip(&a).for_each(|(o, v)| *o = v.re);
        w_t.data.iter_mut().zip(&b).for_each(|(o, v)| *o = v.re);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
    }

    #[test]
    fn semigroup_and_generator() {
        for kappa in [0.0, 1.0, 2.0, 13.0] {
            let (s, t) = (0.013, 0.029);
            let lhs = mode_exponential(kappa, s + t);
            let rhs = matmul(mode_exponential(kappa, s), mode_exponential(kappa, t));
            for i in 0..4 {
                assert!((lhs[i] - rhs[i]).abs() < 1e-14 * (1.0 + kappa * kappa));
            }
            let h = 1e-6;
            let e = mode_exponential(kappa, h);
            let m = [0.0, 1.0, -kappa * kappa, -kappa];
            for i in 0..4 {
                let id = if i == 0 || i == 3 { 1.0 } else { 0.0 };
                assert!(((e[i] - id) / h - m[i]).abs() < 1e-5 * (1.0 + kappa.powi(4)));
            }
        }
    }

    #[test]
    fn single_mode_matches_closed_form() {
        let g = Grid::new(8, 8, 5).unwrap();
        let prop = PlatePropagator::new(&g, 0.3);
        let mut w = g.boundary(apev_discretization::Side::Top, |x, _| x.cos());
        let mut wt = g.boundary_zeros(apev_discretization::Side::Top);
        prop.apply(&g, &mut w, &mut wt);
        let e = mode_exponential(1.0, 0.3);
        let expect = g.boundary(apev_discretization::Side::Top, |x, _| e[0] * x.cos());
        assert!((&w - &expect).max_abs() < 1e-15);
    }
}
