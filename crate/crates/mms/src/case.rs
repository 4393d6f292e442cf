//! The manufactured-solution catalog.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use apev_discretization::{BoundaryField, Grid, ScalarField, Side, VectorField};
use apev_geometry::HarmonicExtension;
use apev_solver::{Forcing, PressureLaw, SolverError, State};

use crate::dual::{Dual, Point};
use crate::MmsError;

/// Plate displacement term `amp·cos(k·x' + ωt + phase)` with integer `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlateMode {
    pub amp: f64,
    pub k: [f64; 2],
    pub omega: f64,
    pub phase: f64,
}

impl PlateMode {
    fn theta(&self, p: &Point) -> Dual {
        p[0] * self.k[0] + p[1] * self.k[1] + p[3] * self.omega + self.phase
    }

    /// Value on Γ₁; the `x₃` entry of `p` is ignored.
    pub fn eval(&self, p: &Point) -> Dual {
        self.theta(p).cos() * self.amp
    }

    /// The mode `∂ₐ` of this one, with `axis` 0, 1 for `x₁`, `x₂` and 3 for `t`.
    pub fn deriv(&self, axis: usize) -> Self {
        let c = match axis {
            0 | 1 => self.k[axis],
            3 => self.omega,
            _ => panic!("plate modes do not depend on x₃"),
        };
        Self { amp: self.amp * c, phase: self.phase + FRAC_PI_2, ..*self }
    }

    /// `|k|²`
    pub fn kappa(&self) -> f64 {
        self.k[0] * self.k[0] + self.k[1] * self.k[1]
    }

    /// Harmonic extension with zero bottom trace: the mode times `sinh(|k|x₃)/sinh|k|` (or `x₃`).
    pub fn extend(&self, p: &Point) -> Dual {
        let k = self.kappa().sqrt();
        let profile = if k == 0.0 { p[2] } else { (p[2] * k).sinh() * (1.0 / k.sinh()) };
        self.eval(p) * profile
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseName {
    /// (a) fluid only, `w* ≡ 0`.
    Frozen,
    /// (b) plate only, fluid held fixed.
    Plate,
    /// (c) fully coupled, small amplitude.
    Coupled,
}

impl CaseName {
    pub const ALL: [CaseName; 3] = [CaseName::Frozen, CaseName::Plate, CaseName::Coupled];

    pub fn label(self) -> &'static str {
        match self {
            CaseName::Frozen => "frozen",
            CaseName::Plate => "plate",
            CaseName::Coupled => "coupled",
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaseName {
    type Err = MmsError;
    fn from_str(s: &str) -> Result<Self, MmsError> {
        match s {
            "a" | "frozen" => Ok(CaseName::Frozen),
            "b" | "plate" => Ok(CaseName::Plate),
            "c" | "coupled" => Ok(CaseName::Coupled),
            _ => Err(MmsError::UnknownCase(s.to_string())),
        }
    }
}

/// An analytic triple `(v*, R*, w*)` and the forcing that makes it a solution.
#[derive(Clone, Debug)]
pub struct MmsCase {
    pub name: CaseName,
    pub law: PressureLaw,
    /// Fluid amplitude.
    pub amp: f64,
    /// Amplitude of the `x₃`-dependent part of the frozen-geometry fields.
    pub vertical: f64,
    pub plate: Vec<PlateMode>,
}

/// Nodal values of the fluid forcing and exact fields.
struct Nodal {
    v: [f64; 3],
    r: f64,
}

pub fn build_case(name: &str) -> Result<MmsCase, MmsError> {
    Ok(MmsCase::new(name.parse()?))
}

impl MmsCase {
    pub fn new(name: CaseName) -> Self {
        let law = PressureLaw::default();
        match name {
            CaseName::Frozen => Self { name, law, amp: 1.0, vertical: 0.05, plate: Vec::new() },
            CaseName::Plate => Self {
                name,
                law,
                amp: 0.0,
                vertical: 0.0,
                plate: vec![PlateMode { amp: 0.01, k: [1.0, 0.0], omega: 1.0, phase: 0.0 }],
            },
            CaseName::Coupled => {
                let a = 1e-3;
                Self {
                    name,
                    law,
                    amp: a,
                    vertical: 0.0,
                    plate: vec![
                        PlateMode { amp: a, k: [1.0, 0.0], omega: 1.0, phase: 0.0 },
                        PlateMode { amp: 0.5 * a, k: [0.0, 1.0], omega: -1.0, phase: 0.3 },
                        PlateMode { amp: 0.3 * a, k: [0.0, 0.0], omega: 1.0, phase: 0.0 },
                    ],
                }
            }
        }
    }

    /// Whether the fluid is held fixed while the plate evolves.
    pub fn fluid_frozen(&self) -> bool {
        self.name == CaseName::Plate
    }

    fn plate_sum(&self, p: &Point, f: impl Fn(&PlateMode, &Point) -> Dual) -> Dual {
        self.plate.iter().fold(Dual::constant(0.0), |acc, m| acc + f(m, p))
    }

    /// `w*` with partials in `(x₁, x₂, t)`.
    pub fn w(&self, p: &Point) -> Dual {
        self.plate_sum(p, PlateMode::eval)
    }

    /// `∂ₐw*` as a differentiable function.
    pub fn dw(&self, p: &Point, axis: usize) -> Dual {
        self.plate_sum(p, |m, p| m.deriv(axis).eval(p))
    }

    /// `ψ* = x₃ + E(w*)`.
    pub fn psi(&self, p: &Point) -> Dual {
        p[2] + self.plate_sum(p, PlateMode::extend)
    }

    fn base_velocity(&self, p: &Point) -> [Dual; 3] {
        let [x1, x2, x3, t] = *p;
        let a = self.amp;
        match self.name {
            CaseName::Frozen => {
                let e = self.vertical;
                [
                    x2.sin() * t.cos() + e * (x1.cos() * (PI * x3).cos() * t.sin()),
                    e * ((x1 + x2).sin() * (1.0 - x3 * x3) * t.cos()),
                    e * ((PI * x3).sin() * (x1 + x2).cos() * t.sin()),
                ]
            }
            CaseName::Plate => [Dual::constant(0.0); 3],
            CaseName::Coupled => [
                a * (x2.sin() * t.cos() + x1.cos() * (PI * x3).cos() * t.sin()),
                a * ((x1 - x2).cos() * (1.0 + x3 * x3) * t.cos()),
                a * ((PI * x3).sin() * (x1 + x2).cos() * t.sin()),
            ],
        }
    }

    /// `v*`. In the coupled case `v₃*` carries the correction `x₃·(w_t − b₃·v_base)|Γ₁`,
    /// so `b₃ᵢvᵢ = w_t` holds on Γ₁ exactly.
    pub fn velocity(&self, p: &Point) -> [Dual; 3] {
        let mut v = self.base_velocity(p);
        if self.name == CaseName::Coupled {
            let top = [p[0], p[1], Dual::constant(1.0), p[3]];
            let vt = self.base_velocity(&top);
            let defect = self.dw(p, 3) + self.dw(p, 0) * vt[0] + self.dw(p, 1) * vt[1] - vt[2];
            v[2] = v[2] + p[2] * defect;
        }
        v
    }

    /// `R*`.
    pub fn density(&self, p: &Point) -> Dual {
        let [x1, x2, x3, t] = *p;
        match self.name {
            CaseName::Frozen => {
                1.0 + 0.1 * (x1.cos() * t.sin()) + self.vertical * (x2.cos() * (PI * x3).cos() * t.cos())
            }
            CaseName::Plate => 1.0 + 0.05 * x2.cos(),
            CaseName::Coupled => {
                let a = self.amp;
                1.0 + a * ((x1 - t).cos() * (1.0 + 0.5 * x3 * x3) + (x2 + t).sin() * (PI * x3).cos())
            }
        }
    }

    /// Fluid forcing `(∂ₜv* + (v* − η_t)ⱼaₖⱼ∂ₖv* + (q'/R)∇_aR*, ∂ₜR* + … + R* div_a v*)` at a point.
    pub fn fluid_forcing_at(&self, x1: f64, x2: f64, x3: f64, t: f64) -> ([f64; 3], f64) {
        let p = Dual::point(x1, x2, x3, t);
        let (v, r, psi) = (self.velocity(&p), self.density(&p), self.psi(&p));
        let [p1, p2, jac, pt] = psi.d;
        let w = (v[2].v - p1 * v[0].v - p2 * v[1].v - pt) / jac;
        let adv = |f: &Dual| v[0].v * f.d[0] + v[1].v * f.d[1] + w * f.d[2];
        let grad_a = |f: &Dual| [f.d[0] - p1 * f.d[2] / jac, f.d[1] - p2 * f.d[2] / jac, f.d[2] / jac];
        let div: f64 = (0..3).map(|i| grad_a(&v[i])[i]).sum();
        let coef = self.law.d_coefficient(r.v, 0);
        let gr = grad_a(&r);
        let fv = std::array::from_fn(|i| v[i].d[3] + adv(&v[i]) + coef * gr[i]);
        (fv, r.d[3] + adv(&r) + r.v * div)
    }

    /// Plate forcing `w*_tt + Δ²w* − Δw*_t − q(R*)` on Γ₁.
    pub fn plate_forcing_at(&self, x1: f64, x2: f64, t: f64) -> f64 {
        let p = Dual::point(x1, x2, 1.0, t);
        let mut f = -self.law.q(self.density(&p).v);
        for m in &self.plate {
            let kk = m.kappa();
            f += m.deriv(3).deriv(3).eval(&p).v + kk * kk * m.eval(&p).v + kk * m.deriv(3).eval(&p).v;
        }
        f
    }

    fn nodal(&self, grid: &Grid, f: impl Fn(f64, f64, f64) -> Nodal) -> (VectorField, ScalarField) {
        let n = grid.len();
        let mut v = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
        let mut r = Vec::with_capacity(n);
        for &z in &grid.x3 {
            for &x in &grid.x1 {
                for &y in &grid.x2 {
                    let s = f(x, y, z);
                    v.iter_mut().zip(s.v).for_each(|(c, x)| c.push(x));
                    r.push(s.r);
                }
            }
        }
        (v.map(ScalarField::from_vec), ScalarField::from_vec(r))
    }

    /// Exact `(v*, R*, w*, w*_t)` at time `t` as a solver state.
    pub fn exact_state(&self, grid: &Grid, ext: &HarmonicExtension, t: f64) -> Result<State, SolverError> {
        let (v, r) = self.nodal(grid, |x, y, z| {
            let p = Dual::point(x, y, z, t);
            Nodal { v: self.velocity(&p).map(|c| c.v), r: self.density(&p).v }
        });
        let w = grid.boundary(Side::Top, |x, y| self.w(&Dual::point(x, y, 1.0, t)).v);
        let w_t = grid.boundary(Side::Top, |x, y| self.dw(&Dual::point(x, y, 1.0, t), 3).v);
        State::new(grid, ext, t, v, r, w, w_t)
    }

    /// Exact `(∂ₜv*, ∂ₜR*, w*_tt)` at time `t`.
    pub fn exact_rates(&self, grid: &Grid, t: f64) -> (VectorField, ScalarField, BoundaryField) {
        let (v, r) = self.nodal(grid, |x, y, z| {
            let p = Dual::point(x, y, z, t);
            Nodal { v: self.velocity(&p).map(|c| c.d[3]), r: self.density(&p).d[3] }
        });
        let wtt = grid.boundary(Side::Top, |x, y| {
            let p = Dual::point(x, y, 1.0, t);
            self.plate.iter().map(|m| m.deriv(3).deriv(3).eval(&p).v).sum()
        });
        (v, r, wtt)
    }
}

impl Forcing for MmsCase {
    fn fluid(&self, grid: &Grid, t: f64) -> Option<(VectorField, ScalarField)> {
        (!self.fluid_frozen()).then(|| {
            self.nodal(grid, |x, y, z| {
                let (v, r) = self.fluid_forcing_at(x, y, z, t);
                Nodal { v, r }
            })
        })
    }

    fn plate(&self, grid: &Grid, t: f64) -> Option<BoundaryField> {
        Some(grid.boundary(Side::Top, |x, y| self.plate_forcing_at(x, y, t)))
    }

    fn freezes_fluid(&self) -> bool {
        self.fluid_frozen()
    }
}
