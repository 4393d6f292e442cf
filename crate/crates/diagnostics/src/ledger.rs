//! Term-by-term energy ledgers for `∂ = ∂ₜᵐ`, `m = 0..=3`.
//!
//! Each ledger evaluates the labeled terms of one exact energy identity at the
//! window center and reports the defect `rate − Σ(signed terms)`. For `m = 0`
//! the rate is the centered difference of the energy over the window; for
//! `m ≥ 1` it is assembled from `∂ᵐ⁺¹` of the trajectory.

use std::fmt;
use std::ops::{AddAssign, Mul, Sub};
use std::str::FromStr;

use apev_discretization::{BoundaryField, Grid, ScalarField, Side, VectorField};
use apev_solver::rhs::{fluid_rhs, Geometry};
use apev_solver::{PressureLaw, State};

use crate::kinematics::{dot, trace3};
use crate::{DiagnosticsError, JetWindow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LedgerKind {
    /// `½ d/dt ∫JR|∂v|²`
    Momentum,
    /// `½ d/dt (‖∂w_t‖² + ‖Δ∂w‖²) + ‖∇∂w_t‖²` on Γ₁.
    Plate,
    /// The plate identity with weight `1/(JR)`.
    PlateWeighted,
    /// `½ d/dt ∫J(q'/R)|∂R|²`
    Density,
}

impl LedgerKind {
    pub const ALL: [LedgerKind; 4] = [Self::Momentum, Self::Plate, Self::PlateWeighted, Self::Density];

    pub fn name(self) -> &'static str {
        match self {
            Self::Momentum => "momentum",
            Self::Plate => "plate",
            Self::PlateWeighted => "plateW",
            Self::Density => "density",
        }
    }

    /// Term labels in output order.
    pub fn terms(self) -> &'static [&'static str] {
        match self {
            Self::Momentum => &["rate", "K1", "K2", "K3", "K4", "K5", "I1", "I2", "I_B1"],
            Self::Plate => &["rate_kinetic", "rate_bending", "damping", "I_B", "I_B1", "I_B2", "I_B3", "I_B4"],
            Self::PlateWeighted => &["rate", "damping", "P_rho_t", "P_cross", "P_lap_rho", "P_grad_rho", "I_B_weighted"],
            Self::Density => &["rate", "I0", "K6", "K7", "K8", "K9", "K10", "K11", "I2", "I3"],
        }
    }
}

impl fmt::Display for LedgerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LedgerKind {
    type Err = DiagnosticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| DiagnosticsError::UnknownLedger(s.into()))
    }
}

/// One time sample of a ledger.
#[derive(Clone, Debug)]
pub struct LedgerRow {
    pub t: f64,
    pub kind: LedgerKind,
    pub m: usize,
    /// Values in the order of [`LedgerKind::terms`].
    pub terms: Vec<f64>,
    /// `|rate − Σ(signed terms)|`
    pub residual: f64,
}

impl LedgerRow {
    pub fn term(&self, name: &str) -> Option<f64> {
        self.kind.terms().iter().position(|t| *t == name).map(|i| self.terms[i])
    }

    pub fn header(kind: LedgerKind) -> Vec<String> {
        let mut h = vec!["t".to_string(), "m".to_string()];
        h.extend(kind.terms().iter().map(|s| s.to_string()));
        h.push("identity_residual".into());
        h
    }

    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![self.t, self.m as f64];
        v.extend(&self.terms);
        v.push(self.residual);
        v
    }
}

/// `Σ wᵢxᵢ`; when the weights sum to zero the center entry is subtracted
/// first so that constant series give exactly zero.
fn fd<T>(w: &[f64], xs: impl IntoIterator<Item = T>) -> T
where
    T: Clone + for<'a> AddAssign<&'a T>,
    for<'a> &'a T: Mul<f64, Output = T> + Sub<&'a T, Output = T>,
{
    let xs: Vec<T> = xs.into_iter().collect();
    let mid = xs.len() / 2;
    if w[mid] == 1.0 && w.iter().filter(|c| **c != 0.0).count() == 1 {
        return xs[mid].clone();
    }
    let mut out = &xs[mid] * 0.0;
    for (i, (c, x)) in w.iter().zip(&xs).enumerate() {
        if i != mid && *c != 0.0 {
            out += &(&(x - &xs[mid]) * *c);
        }
    }
    out
}

/// Per-state quantities shared by the ledgers.
struct Sample<'s> {
    s: &'s State,
    q: ScalarField,
    /// `q'/R`
    rho: ScalarField,
    /// `(∂ₜv, ∂ₜR)` from the equations, only needed for `m ≥ 1`.
    rates: Option<(VectorField, ScalarField)>,
}

/// `B = (J v₁, J v₂, b₃ᵢvᵢ)`, so `B_k = vⱼb_{kj}`.
fn b_velocity(s: &State) -> VectorField {
    [&s.maps.jac * &s.v[0], &s.maps.jac * &s.v[1], dot(&s.maps.b3, &s.v)]
}

/// `b_{ki}∂ₖxᵢ = J div_a x`.
fn b_div(grid: &Grid, s: &State, x: &VectorField) -> ScalarField {
    let mut out = &(&grid.deriv(&x[0], 1) + &grid.deriv(&x[1], 2)) * &s.maps.jac;
    for i in 0..3 {
        out += &(&s.maps.b3[i] * &grid.dz(&x[i]));
    }
    out
}

/// `(b_{ki}∂ₖq)ᵢ`
fn b_grad(grid: &Grid, s: &State, q: &ScalarField) -> VectorField {
    let g = grid.grad(q);
    std::array::from_fn(|i| {
        let mut c = &s.maps.b3[i] * &g[2];
        if i < 2 {
            c += &(&s.maps.jac * &g[i]);
        }
        c
    })
}

fn grad_b(grid: &Grid, f: &BoundaryField) -> [BoundaryField; 2] {
    [grid.deriv_tangential_boundary(f, 1, 1), grid.deriv_tangential_boundary(f, 2, 1)]
}

fn dot_b(a: &[BoundaryField], b: &[BoundaryField]) -> BoundaryField {
    let mut out = &a[0] * &b[0];
    for (x, y) in a.iter().zip(b).skip(1) {
        out += &(x * y);
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Evaluates one ledger at the window center.
pub fn energy_ledger(
    grid: &Grid,
    law: &PressureLaw,
    window: &JetWindow,
    kind: LedgerKind,
    m: usize,
) -> Result<LedgerRow, DiagnosticsError> {
    if m > 3 {
        return Err(DiagnosticsError::Order(m));
    }
    window.require(m + 1)?;
    let samples: Vec<Sample<'_>> = window
        .states()
        .map(|s| {
            let q = s.r.map(|x| law.q(x));
            let rho = s.r.map(|x| law.dq(x, 1) / x);
            let rates = (m > 0 && matches!(kind, LedgerKind::Momentum | LedgerKind::Density))
                .then(|| fluid_rhs(grid, law, &s.v, &s.r, &Geometry::of(&s.maps)));
            Sample { s, q, rho, rates }
        })
        .collect();
    let weights: Vec<Vec<f64>> = (0..=m + 2)
        .map(|j| {
            if j == 0 {
                let mut w = vec![0.0; window.len()];
                w[window.len() / 2] = 1.0;
                w
            } else if j < window.len() {
                window.weights(j)
            } else {
                Vec::new()
            }
        })
        .collect();
    let c = &samples[window.len() / 2];
    let ctx = Ctx { grid, law, samples: &samples, weights: &weights, c, m };
    let (terms, residual) = match kind {
        LedgerKind::Momentum => ctx.momentum(),
        LedgerKind::Density => ctx.density(),
        LedgerKind::Plate => ctx.plate(),
        LedgerKind::PlateWeighted => ctx.plate_weighted(),
    };
    Ok(LedgerRow { t: c.s.t, kind, m, terms, residual: residual.abs() })
}

struct Ctx<'a, 's> {
    grid: &'a Grid,
    law: &'a PressureLaw,
    samples: &'a [Sample<'s>],
    weights: &'a [Vec<f64>],
    c: &'a Sample<'s>,
    m: usize,
}

impl Ctx<'_, '_> {
    /// `∂ₜʲ` of a per-sample interior field.
    fn d(&self, j: usize, f: impl Fn(&Sample<'_>) -> ScalarField) -> ScalarField {
        fd(&self.weights[j], self.samples.iter().map(f))
    }

    fn db(&self, j: usize, f: impl Fn(&Sample<'_>) -> BoundaryField) -> BoundaryField {
        fd(&self.weights[j], self.samples.iter().map(f))
    }

    /// `∂ₜʲ∫f`, differencing the integrands before integrating.
    fn d_int(&self, j: usize, f: impl Fn(&Sample<'_>) -> ScalarField) -> f64 {
        self.int(&self.d(j, f))
    }

    fn d_int_b(&self, j: usize, f: impl Fn(&Sample<'_>) -> BoundaryField) -> f64 {
        self.int_b(&self.db(j, f))
    }

    fn dv(&self, j: usize, f: impl Fn(&Sample<'_>) -> VectorField) -> VectorField {
        let all: Vec<VectorField> = self.samples.iter().map(f).collect();
        std::array::from_fn(|i| fd(&self.weights[j], all.iter().map(|x| x[i].clone())))
    }

    fn int(&self, f: &ScalarField) -> f64 {
        self.grid.integrate(f)
    }

    fn int_b(&self, f: &BoundaryField) -> f64 {
        self.grid.integrate_boundary(f)
    }

    fn v_rate(s: &Sample<'_>) -> VectorField {
        s.rates.as_ref().expect("rates computed for m ≥ 1").0.clone()
    }

    fn r_rate(s: &Sample<'_>) -> ScalarField {
        s.rates.as_ref().expect("rates computed for m ≥ 1").1.clone()
    }

    fn momentum(&self) -> (Vec<f64>, f64) {
        let (g, m, c) = (self.grid, self.m, self.c);
        let s = c.s;
        let jr = |x: &Sample<'_>| &x.s.maps.jac * &x.s.r;
        let dvm = self.dv(m, |x| x.s.v.clone());
        let sq = dot(&dvm, &dvm);
        let dq = self.d(m, |x| x.q.clone());
        let k1 = 0.5 * self.int(&(&self.d(1, jr) * &sq));
        let rate = if m == 0 {
            self.d_int(1, |x| &(&jr(x) * &dot(&x.s.v, &x.s.v)) * 0.5)
        } else {
            let next = self.dv(m + 1, |x| x.s.v.clone());
            k1 + self.int(&(&jr(c) * &dot(&dvm, &next)))
        };
        let bv = b_velocity(s);
        let commutator = |prod: &dyn Fn(&Sample<'_>) -> VectorField, frozen: VectorField| -> f64 {
            if m == 0 {
                return 0.0;
            }
            let dp = self.dv(m, |x| prod(x));
            let diff: VectorField = std::array::from_fn(|i| &dp[i] - &frozen[i]);
            self.int(&dot(&diff, &dvm))
        };
        let (k2, k3, k4, k5) = if m == 0 {
            (0.0, 0.0, 0.0, 0.0)
        } else {
            let dvt = self.dv(m, Self::v_rate);
            let k2 = commutator(
                &|x| {
                    let a = jr(x);
                    Self::v_rate(x).map(|f| &a * &f)
                },
                std::array::from_fn(|i| &jr(c) * &dvt[i]),
            );
            let transport = |x: &Sample<'_>, v: &VectorField| -> VectorField {
                let b = b_velocity(x.s);
                std::array::from_fn(|i| &x.s.r * &dot(&b, &g.grad(&v[i])))
            };
            let k3 = commutator(&|x| transport(x, &x.s.v), transport(c, &dvm));
            let vertical = |x: &Sample<'_>, v: &VectorField| -> VectorField {
                let a = &x.s.r * &x.s.maps.psi_t;
                std::array::from_fn(|i| &a * &g.dz(&v[i]))
            };
            let k4 = commutator(&|x| vertical(x, &x.s.v), vertical(c, &dvm));
            let k5 = commutator(&|x| b_grad(g, x.s, &x.q), b_grad(g, s, &dq));
            (k2, k3, k4, k5)
        };
        let mut carrier = bv.clone();
        carrier[2] -= &s.maps.psi_t;
        let i1 = 0.5 * self.int(&(&s.r * &dot(&carrier, &g.grad(&sq))));
        let i2 = self.int(&(&dq * &b_div(g, s, &dvm)));
        let top = trace3(g, &dvm, Side::Top);
        let ib1 = self.int_b(&(&g.trace(&dq, Side::Top) * &dot_b(&s.maps.nu, &top)));
        let residual = rate - (k1 - k2 - i1 - k3 + k4 + i2 - k5 - ib1);
        (vec![rate, k1, k2, k3, k4, k5, i1, i2, ib1], residual)
    }

    fn density(&self) -> (Vec<f64>, f64) {
        let (g, m, c) = (self.grid, self.m, self.c);
        let s = c.s;
        let jrho = |x: &Sample<'_>| &x.s.maps.jac * &x.rho;
        let drm = self.d(m, |x| x.s.r.clone());
        let sq = &drm * &drm;
        let dq = self.d(m, |x| x.q.clone());
        let dvm = self.dv(m, |x| x.s.v.clone());
        let i0 = 0.5 * self.int(&(&self.d(1, jrho) * &sq));
        let rate = if m == 0 {
            self.d_int(1, |x| &(&(&jrho(x) * &x.s.r) * &x.s.r) * 0.5)
        } else {
            i0 + self.int(&(&(&jrho(c) * &drm) * &self.d(m + 1, |x| x.s.r.clone())))
        };
        let against = |f: ScalarField| self.int(&(&f * &drm));
        let (k6, k7, k8, k10, k11) = if m == 0 {
            (0.0, 0.0, 0.0, 0.0, 0.0)
        } else {
            let jrr = self.d(m, |x| &jrho(x) * &Self::r_rate(x));
            let k6 = against(&jrr - &(&jrho(c) * &self.d(m, Self::r_rate)));
            let k7 = against(&jrr - &(&c.rho * &self.d(m, |x| &x.s.maps.jac * &Self::r_rate(x))));
            let k8 = against(
                &c.rho * &(&self.d(m, |x| &x.s.r * &b_div(g, x.s, &x.s.v)) - &(&s.r * &b_div(g, s, &dvm))),
            );
            let advect = |x: &State, f: &ScalarField| dot(&b_velocity(x), &g.grad(f));
            let k10 = against(&c.rho * &(&self.d(m, |x| advect(x.s, &x.s.r)) - &advect(s, &drm)));
            let vert = |x: &State, f: &ScalarField| &x.maps.psi_t * &g.dz(f);
            let k11 = against(&c.rho * &(&self.d(m, |x| vert(x.s, &x.s.r)) - &vert(s, &drm)));
            (k6, k7, k8, k10, k11)
        };
        let q1 = s.r.map(|x| self.law.dq(x, 1));
        let bd = b_div(g, s, &dvm);
        let k9 = self.int(&(&bd * &(&(&q1 * &drm) - &dq)));
        let i2 = self.int(&(&bd * &dq));
        let gsq = g.grad(&sq);
        let i3 = 0.5 * self.int(&(&c.rho * &dot(&b_velocity(s), &gsq)))
            - 0.5 * self.int(&(&(&c.rho * &s.maps.psi_t) * &gsq[2]));
        let residual = rate - (i0 - k6 + k7 - i2 - i3 - k8 - k9 - k10 + k11);
        (vec![rate, i0, k6, k7, k8, k9, k10, k11, i2, i3], residual)
    }

    /// `(∂ᵐ⁺¹w, Δ∂ᵐw, ∂ᵐ⁺²w)` on Γ₁.
    fn plate_fields(&self) -> (BoundaryField, BoundaryField, BoundaryField) {
        let m = self.m;
        let w1 = self.db(m, |x| x.s.w_t.clone());
        let lap = self.grid.laplacian_h(&self.db(m, |x| x.s.w.clone()));
        let w2 = self.db(m + 1, |x| x.s.w_t.clone());
        (w1, lap, w2)
    }

    fn plate(&self) -> (Vec<f64>, f64) {
        let (g, m) = (self.grid, self.m);
        let (w1, lap, w2) = self.plate_fields();
        let (kinetic, bending) = if m == 0 {
            (
                self.d_int_b(1, |x| &(&x.s.w_t * &x.s.w_t) * 0.5),
                self.d_int_b(1, |x| {
                    let l = g.laplacian_h(&x.s.w);
                    &(&l * &l) * 0.5
                }),
            )
        } else {
            (self.int_b(&(&w1 * &w2)), self.int_b(&(&lap * &g.laplacian_h(&w1))))
        };
        let gw = grad_b(g, &w1);
        let damping = self.int_b(&dot_b(&gw, &gw));
        let dq = g.trace(&self.d(m, |x| x.q.clone()), Side::Top);
        let ib = self.int_b(&(&dq * &w1));
        // ∂ᵐ⁺¹w = ∂ᵐ(νᵢvᵢ) on Γ₁, split by Leibniz: j = 0 is I_B1, j = m is I_B2,
        // j = 1 and j = 2 (when below m) are I_B3 and I_B4.
        let leibniz = |j: usize| -> f64 {
            let dnu: Vec<BoundaryField> = (0..3).map(|i| self.db(j, |x| x.s.maps.nu[i].clone())).collect();
            let dv = trace3(g, &self.dv(m - j, |x| x.s.v.clone()), Side::Top);
            binomial(m, j) * self.int_b(&(&dq * &dot_b(&dnu, &dv)))
        };
        let ib2 = if m >= 1 { leibniz(m) } else { 0.0 };
        let ib3 = if m >= 2 { leibniz(1) } else { 0.0 };
        let ib4 = if m >= 3 { leibniz(2) } else { 0.0 };
        let ib1 = ib - ib2 - ib3 - ib4;
        let residual = kinetic + bending + damping - ib;
        (vec![kinetic, bending, damping, ib, ib1, ib2, ib3, ib4], residual)
    }

    fn plate_weighted(&self) -> (Vec<f64>, f64) {
        let (g, m, c) = (self.grid, self.m, self.c);
        let weight = |x: &Sample<'_>| g.trace(&(&x.s.maps.jac * &x.s.r), Side::Top).map(|v| 1.0 / v);
        let rho = weight(c);
        let (w1, lap, w2) = self.plate_fields();
        let energy = &(&w1 * &w1) + &(&lap * &lap);
        let rho_t = self.db(1, weight);
        let p_rho_t = 0.5 * self.int_b(&(&rho_t * &energy));
        let rate = if m == 0 {
            self.d_int_b(1, |x| {
                let l = g.laplacian_h(&x.s.w);
                let e = &(&x.s.w_t * &x.s.w_t) + &(&l * &l);
                &(&weight(x) * &e) * 0.5
            })
        } else {
            p_rho_t + self.int_b(&(&rho * &(&(&w1 * &w2) + &(&lap * &g.laplacian_h(&w1)))))
        };
        let grho = grad_b(g, &rho);
        let gw = grad_b(g, &w1);
        let damping = self.int_b(&(&rho * &dot_b(&gw, &gw)));
        let p_cross = -2.0 * self.int_b(&(&lap * &dot_b(&grho, &gw)));
        let p_lap = -self.int_b(&(&(&g.laplacian_h(&rho) * &lap) * &w1));
        let p_grad = -self.int_b(&(&w1 * &dot_b(&grho, &gw)));
        let dq = g.trace(&self.d(m, |x| x.q.clone()), Side::Top);
        let ib = self.int_b(&(&(&rho * &dq) * &w1));
        let residual = rate + damping - (p_rho_t + p_cross + p_lap + p_grad + ib);
        (vec![rate, damping, p_rho_t, p_cross, p_lap, p_grad, ib], residual)
    }
}
