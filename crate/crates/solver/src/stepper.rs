use std::f64::consts::PI;

use apev_discretization::{BoundaryField, Grid, ScalarField, Side, VectorField};
use apev_geometry::{AleMaps, HarmonicExtension};

use crate::plate::PlatePropagator;
use crate::rhs::{fluid_rhs, vertical_transport, Geometry};
use crate::{PressureLaw, SolverError, State};

/// Manufactured source terms added to the right-hand sides.
pub trait Forcing {
    fn fluid(&self, _grid: &Grid, _t: f64) -> Option<(VectorField, ScalarField)> {
        None
    }
    fn plate(&self, _grid: &Grid, _t: f64) -> Option<BoundaryField> {
        None
    }
    /// Keep `(v, R)` fixed and advance the plate alone.
    fn freezes_fluid(&self) -> bool {
        false
    }
}

/// Makes `v₃ = 0` on Γ₀ and `ν·v = w_t` on Γ₁ by the minimal change along `ν`.
pub fn enforce_boundary(grid: &Grid, nu: &[BoundaryField; 3], v: &mut VectorField, w_t: &BoundaryField) {
    let bottom = grid.layer(Side::Bottom);
    grid.plane_mut(&mut v[2], bottom).fill(0.0);
    let top = grid.layer(Side::Top);
    let lambda: Vec<f64> = (0..grid.plane_len())
        .map(|j| {
            let n = [nu[0].data[j], nu[1].data[j], nu[2].data[j]];
            let dot: f64 = (0..3).map(|i| n[i] * grid.plane(&v[i], top)[j]).sum();
            (w_t.data[j] - dot) / (n[0] * n[0] + n[1] * n[1] + n[2] * n[2])
        })
        .collect();
    for (i, vi) in v.iter_mut().enumerate() {
        for (x, (l, n)) in grid.plane_mut(vi, top).iter_mut().zip(lambda.iter().zip(&nu[i].data)) {
            *x += l * n;
        }
    }
}

/// Fixed step `T / ⌈T / dt_max⌉` and the step count.
pub fn fixed_dt(t_final: f64, dt_max: f64) -> (f64, usize) {
    let steps = (t_final / dt_max).ceil().max(1.0) as usize;
    (t_final / steps as f64, steps)
}

#[derive(Clone)]
struct Stage {
    v: VectorField,
    r: ScalarField,
    w: BoundaryField,
    w_t: BoundaryField,
}

impl Stage {
    fn of(s: &State) -> Self {
        Self { v: s.v.clone(), r: s.r.clone(), w: s.w.clone(), w_t: s.w_t.clone() }
    }

    fn axpy(&mut self, c: f64, k: &Stage) {
        for (a, b) in self.v.iter_mut().zip(&k.v) {
            a.axpy(c, b);
        }
        self.r.axpy(c, &k.r);
        self.w.axpy(c, &k.w);
        self.w_t.axpy(c, &k.w_t);
    }

    fn propagated(&self, grid: &Grid, e: &PlatePropagator) -> Self {
        let mut out = self.clone();
        e.apply(grid, &mut out.w, &mut out.w_t);
        out
    }
}

/// Coupled time stepper: classical RK4 for the fluid and integrating-factor
/// (Lawson) RK4 for the plate, sharing stages.
pub struct Stepper<'a> {
    pub grid: &'a Grid,
    pub ext: &'a HarmonicExtension,
    pub law: PressureLaw,
    pub forcing: Option<&'a dyn Forcing>,
}

impl<'a> Stepper<'a> {
    pub fn new(grid: &'a Grid, ext: &'a HarmonicExtension, law: PressureLaw) -> Self {
        Self { grid, ext, law, forcing: None }
    }

    pub fn with_forcing(mut self, f: &'a dyn Forcing) -> Self {
        self.forcing = Some(f);
        self
    }

    fn frozen(&self) -> bool {
        self.forcing.is_some_and(|f| f.freezes_fluid())
    }

    /// Refreshes the geometry of a stage and projects the boundary conditions.
    fn settle(&self, y: &mut Stage) -> Result<AleMaps, SolverError> {
        let maps = AleMaps::from_plate(self.grid, self.ext, &y.w, &y.w_t)?;
        if !self.frozen() {
            enforce_boundary(self.grid, &maps.nu, &mut y.v, &y.w_t);
        }
        Ok(maps)
    }

    /// Brings a state into agreement with the boundary conditions.
    pub fn prepare(&self, state: &State) -> Result<State, SolverError> {
        let mut y = Stage::of(state);
        let maps = self.settle(&mut y)?;
        Ok(State { t: state.t, v: y.v, r: y.r, w: y.w, w_t: y.w_t, maps })
    }

    fn check_density(&self, r: &ScalarField) -> Result<(), SolverError> {
        match r.data.iter().position(|x| !(*x > 0.0)) {
            None => Ok(()),
            Some(i) => {
                let p = self.grid.plane_len();
                Err(SolverError::Density {
                    value: r.data[i],
                    i1: (i % p) / self.grid.n2,
                    i2: i % self.grid.n2,
                    i3: i / p,
                })
            }
        }
    }

    /// Nonlinear part of the right-hand side: fluid terms and the plate load `q(R)|Γ₁`.
    fn nonlinear(&self, y: &Stage, maps: &AleMaps, t: f64) -> Result<Stage, SolverError> {
        let g = self.grid;
        self.check_density(&y.r)?;
        let (v, r) = if self.frozen() {
            ([g.zeros(), g.zeros(), g.zeros()], g.zeros())
        } else {
            let (mut dv, mut dr) = fluid_rhs(g, &self.law, &y.v, &y.r, &Geometry::of(maps));
            if let Some((fv, fr)) = self.forcing.and_then(|f| f.fluid(g, t)) {
                dv.iter_mut().zip(&fv).for_each(|(a, b)| *a += b);
                dr += &fr;
            }
            (dv, dr)
        };
        let mut load = g.trace(&y.r, Side::Top).map(|x| self.law.q(x));
        if let Some(fw) = self.forcing.and_then(|f| f.plate(g, t)) {
            load += &fw;
        }
        Ok(Stage { v, r, w: g.boundary_zeros(Side::Top), w_t: load })
    }

    /// Right-hand side `(∂ₜv, ∂ₜR, ∂ₜw_t)` of the coupled system at a state.
    pub fn rhs(&self, state: &State) -> Result<(VectorField, ScalarField, BoundaryField), SolverError> {
        let k = self.nonlinear(&Stage::of(state), &state.maps, state.t)?;
        let mut wtt = crate::rhs::plate_rhs(self.grid, &state.w, &state.w_t, &self.grid.boundary_zeros(Side::Top));
        wtt += &k.w_t;
        Ok((k.v, k.r, wtt))
    }

    /// One step of size `dt`.
    pub fn step(&self, state: &State, dt: f64) -> Result<State, SolverError> {
        let g = self.grid;
        let half = PlatePropagator::new(g, 0.5 * dt);
        let full = PlatePropagator::new(g, dt);
        let t = state.t;
        let y0 = Stage::of(state);

        let k1 = self.nonlinear(&y0, &state.maps, t)?;
        let mut y2 = y0.clone();
        y2.axpy(0.5 * dt, &k1);
        let mut y2 = y2.propagated(g, &half);
        let m2 = self.settle(&mut y2)?;
        let k2 = self.nonlinear(&y2, &m2, t + 0.5 * dt)?;

        let a = y0.propagated(g, &half);
        let b = y0.propagated(g, &full);
        let mut y3 = a;
        y3.axpy(0.5 * dt, &k2);
        let m3 = self.settle(&mut y3)?;
        let k3 = self.nonlinear(&y3, &m3, t + 0.5 * dt)?;

        let mut y4 = b.clone();
        y4.axpy(dt, &k3.propagated(g, &half));
        let m4 = self.settle(&mut y4)?;
        let k4 = self.nonlinear(&y4, &m4, t + dt)?;

        let mut mid = k2;
        mid.axpy(1.0, &k3);
        let mut y = b;
        y.axpy(dt / 6.0, &k1.propagated(g, &full));
        y.axpy(dt / 3.0, &mid.propagated(g, &half));
        y.axpy(dt / 6.0, &k4);
        let maps = self.settle(&mut y)?;
        Ok(State { t: t + dt, v: y.v, r: y.r, w: y.w, w_t: y.w_t, maps })
    }

    /// `dt = safety·min(h₃/(c·max a₃₃ + max|W|), min_d (2π/N_d)/(c + max|v|))`, `c = max √q'(R)`.
    pub fn cfl_dt(&self, state: &State, safety: f64) -> f64 {
        let g = self.grid;
        let c = state.r.data.iter().map(|&x| self.law.dq(x, 1).sqrt()).fold(0.0, f64::max);
        let inv_j = state.maps.a33();
        let wv = vertical_transport(&state.v, &Geometry::of(&state.maps), inv_j);
        let speed = (0..g.len())
            .map(|i| state.v.iter().map(|f| f.data[i] * f.data[i]).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        let vertical = g.h3 / (c * inv_j.max() + wv.max_abs());
        let cell = 2.0 * PI / g.n1.max(g.n2) as f64;
        safety * vertical.min(cell / (c + speed))
    }

    /// Advances `steps` steps of size `dt`, calling `observer` on the
    /// initial state and after every step.
    pub fn integrate<E: From<SolverError>>(
        &self,
        state: &State,
        dt: f64,
        steps: usize,
        mut observer: impl FnMut(&State, usize) -> Result<(), E>,
    ) -> Result<State, E> {
        let t0 = state.t;
        let mut s = self.prepare(state)?;
        observer(&s, 0)?;
        for n in 1..=steps {
            s = self.step(&s, dt)?;
            s.t = t0 + n as f64 * dt;
            if let Some(field) = s.non_finite() {
                return Err(SolverError::Blowup { t: s.t, field }.into());
            }
            observer(&s, n)?;
        }
        Ok(s)
    }
}
