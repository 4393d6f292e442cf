use apev_discretization::{Grid, ScalarField};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LawError {
    #[error("pressure law needs gamma > 1, 0 < m0 < M0 and R̄ > 0 (got gamma = {gamma}, m0 = {m0}, M0 = {big_m0}, R̄ = {rbar})")]
    Parameters { gamma: f64, m0: f64, big_m0: f64, rbar: f64 },
    #[error("density {value:.6e} outside admissible range [{lo}, {hi}] at node ({i1}, {i2}, {i3})")]
    Range { value: f64, lo: f64, hi: f64, i1: usize, i2: usize, i3: usize },
}

/// Barotropic law `q(R) = (R^γ − R̄^γ)/γ`, so `q(R̄) = 0` and `q'(R) = R^{γ−1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PressureLaw {
    pub gamma: f64,
    pub m0: f64,
    pub big_m0: f64,
    pub rbar: f64,
}

impl Default for PressureLaw {
    fn default() -> Self {
        Self { gamma: 1.4, m0: 0.5, big_m0: 2.0, rbar: 1.0 }
    }
}

/// `(q, q', q'')` evaluated on a field.
#[derive(Clone, Debug)]
pub struct PressureFields {
    pub q: ScalarField,
    pub q1: ScalarField,
    pub q2: ScalarField,
}

impl PressureLaw {
    pub fn new(gamma: f64, m0: f64, big_m0: f64, rbar: f64) -> Result<Self, LawError> {
        let ok = gamma > 1.0 && m0 > 0.0 && big_m0 > m0 && rbar > 0.0 && [gamma, m0, big_m0, rbar].iter().all(|x| x.is_finite());
        if !ok {
            return Err(LawError::Parameters { gamma, m0, big_m0, rbar });
        }
        Ok(Self { gamma, m0, big_m0, rbar })
    }

    pub fn q(&self, r: f64) -> f64 {
        (r.powf(self.gamma) - self.rbar.powf(self.gamma)) / self.gamma
    }

    /// `n`-th derivative of `q`.
    pub fn dq(&self, r: f64, n: usize) -> f64 {
        match n {
            0 => self.q(r),
            n => falling(self.gamma - 1.0, n - 1) * r.powf(self.gamma - n as f64),
        }
    }

    /// `n`-th derivative of `q'(R)/R = R^{γ−2}`.
    pub fn d_coefficient(&self, r: f64, n: usize) -> f64 {
        falling(self.gamma - 2.0, n) * r.powf(self.gamma - 2.0 - n as f64)
    }

    /// Admissible density range `[m₀/2, 2M₀]`.
    pub fn range(&self) -> (f64, f64) {
        (0.5 * self.m0, 2.0 * self.big_m0)
    }

    /// `(c₁, c₂)`: bounds of `q'` over the admissible range (`q'` is monotone).
    pub fn q1_bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.range();
        let (a, b) = (self.dq(lo, 1), self.dq(hi, 1));
        (a.min(b), a.max(b))
    }

    /// Pointwise `(q, q', q'')`; fails at the first node outside the admissible range.
    pub fn eval(&self, grid: &Grid, r: &ScalarField) -> Result<PressureFields, LawError> {
        self.check_range(grid, r)?;
        Ok(PressureFields { q: r.map(|x| self.q(x)), q1: r.map(|x| self.dq(x, 1)), q2: r.map(|x| self.dq(x, 2)) })
    }

    pub fn check_range(&self, grid: &Grid, r: &ScalarField) -> Result<(), LawError> {
        let (lo, hi) = self.range();
        match r.data.iter().position(|x| !(lo..=hi).contains(x)) {
            None => Ok(()),
            Some(i) => {
                let p = grid.plane_len();
                Err(LawError::Range { value: r.data[i], lo, hi, i1: (i % p) / grid.n2, i2: i % grid.n2, i3: i / p })
            }
        }
    }
}

/// `a(a−1)…(a−n+1)`.
fn falling(a: f64, n: usize) -> f64 {
    (0..n).map(|k| a - k as f64).product()
}
