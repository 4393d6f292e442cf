//! Built-in analytic initial data.

use std::str::FromStr;

use apev_discretization::{BoundaryField, Grid, ScalarField, Side, VectorField};

/// Support radius of the vertical bump.
pub const BUMP_RADIUS: f64 = 0.6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `v = 0`, `R = R̄`, `w₀ = w₁ = 0`.
    Steady,
    /// Vortical velocity and density perturbation supported in `x₃ < 0.6`.
    Bump,
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "steady" => Ok(Family::Steady),
            "bump" => Ok(Family::Bump),
            other => Err(format!("unknown initial-data family '{other}' (expected steady or bump)")),
        }
    }
}

/// `(v₀, R₀, w₀, w₁)`.
#[derive(Clone, Debug)]
pub struct InitialData {
    pub v0: VectorField,
    pub r0: ScalarField,
    pub w0: BoundaryField,
    pub w1: BoundaryField,
}

/// `β(x₃) = exp(1 − 1/(1 − (x₃/L)²))` for `x₃ < L`, else 0, and `β'`.
pub fn bump(z: f64) -> (f64, f64) {
    let s = z / BUMP_RADIUS;
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let d = 1.0 - s * s;
    let b = (1.0 - 1.0 / d).exp();
    (b, -b * 2.0 * s / (d * d) / BUMP_RADIUS)
}

impl Family {
    /// Data of amplitude `delta` about the reference density `rbar`.
    ///
    /// The bump velocity is `δ·curl A` with
    /// `A = (x₃β sin x₂, x₃β cos x₁, β cos(x₁ − x₂))`, so `v₁, v₂` are even
    /// and `v₃` odd in `x₃`, and the data vanish identically near Γ₁.
    pub fn build(self, grid: &Grid, delta: f64, rbar: f64) -> InitialData {
        let zero = grid.boundary_zeros(Side::Top);
        match self {
            Family::Steady => InitialData {
                v0: [grid.zeros(), grid.zeros(), grid.zeros()],
                r0: grid.constant(rbar),
                w0: zero.clone(),
                w1: zero,
            },
            Family::Bump => {
                let v1 = grid.scalar(|x, y, z| {
                    let (b, db) = bump(z);
                    delta * (b * (x - y).sin() - (b + z * db) * x.cos())
                });
                let v2 = grid.scalar(|x, y, z| {
                    let (b, db) = bump(z);
                    delta * ((b + z * db) * y.sin() + b * (x - y).sin())
                });
                let v3 = grid.scalar(|x, y, z| -delta * z * bump(z).0 * (x.sin() + y.cos()));
                let r0 = grid.scalar(|x, y, z| rbar + delta * (x.cos() * y.cos() + 0.5 * (2.0 * y).sin()) * bump(z).0);
                InitialData { v0: [v1, v2, v3], r0, w0: zero.clone(), w1: zero }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_derivative_matches_difference() {
        for z in [0.0, 0.1, 0.35, 0.55] {
            let h = 1e-6;
            let fd = (bump(z + h).0 - bump(z - h).0) / (2.0 * h);
            assert!((fd - bump(z).1).abs() < 1e-7);
        }
        assert_eq!(bump(0.0).0, 1.0);
        assert_eq!(bump(0.7), (0.0, 0.0));
    }

    #[test]
    fn bump_velocity_is_divergence_free_and_quiet_at_top() {
        let div = |n3: usize| {
            let g = Grid::new(8, 8, n3).unwrap();
            let d = Family::Bump.build(&g, 1e-3, 1.0);
            (&(&g.deriv(&d.v0[0], 1) + &g.deriv(&d.v0[1], 2)) + &g.deriv(&d.v0[2], 3)).max_abs()
        };
        let (coarse, fine) = (div(65), div(129));
        assert!(coarse / fine > 8.0, "{coarse} -> {fine}");
        let g = Grid::new(8, 8, 17).unwrap();
        let d = Family::Bump.build(&g, 1e-3, 1.0);
        for f in d.v0.iter().chain([&d.r0.map(|x| x - 1.0)]) {
            assert_eq!(g.trace(f, Side::Top).max_abs(), 0.0);
        }
        assert_eq!(g.trace(&d.v0[2], Side::Bottom).max_abs(), 0.0);
    }

    #[test]
    fn family_names() {
        assert_eq!("bump".parse::<Family>(), Ok(Family::Bump));
        assert!("vortex".parse::<Family>().is_err());
    }
}
