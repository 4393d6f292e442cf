use std::collections::VecDeque;

use apev_discretization::{BoundaryField, ScalarField};
use apev_solver::State;

use crate::DiagnosticsError;

/// Finite-difference weights for `d^order/dt^order` at `x0` on the nodes `xs`
/// (Fornberg's recursion).
pub fn fornberg(x0: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// The most recent `len` states at uniform spacing `dt`, differentiated in
/// time at the middle one with centered weights.
#[derive(Clone, Debug)]
pub struct JetWindow {
    len: usize,
    dt: f64,
    states: VecDeque<State>,
}

impl JetWindow {
    /// `len` must be odd and at least 3.
    pub fn new(len: usize, dt: f64) -> Self {
        assert!(len % 2 == 1 && len >= 3, "window length must be odd and at least 3");
        Self { len, dt, states: VecDeque::with_capacity(len) }
    }

    /// Window length for time derivatives up to `order` (at least 5).
    pub fn length_for(order: usize) -> usize {
        (2 * order + 1).max(5) | 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn push(&mut self, s: State) {
        if self.states.len() == self.len {
            self.states.pop_front();
        }
        self.states.push_back(s);
    }

    pub fn is_full(&self) -> bool {
        self.states.len() == self.len
    }

    pub fn states(&self) -> impl Iterator<Item = &State> {
        self.states.iter()
    }

    pub fn center(&self) -> Result<&State, DiagnosticsError> {
        self.require(0)?;
        Ok(&self.states[self.len / 2])
    }

    /// Fails unless the window is full and long enough for `order`.
    pub fn require(&self, order: usize) -> Result<(), DiagnosticsError> {
        if !self.is_full() || order + 1 > self.len {
            return Err(DiagnosticsError::Window { have: self.states.len(), need: self.len.max(order + 1) });
        }
        Ok(())
    }

    /// Centered weights for `∂ₜ^order`.
    pub fn weights(&self, order: usize) -> Vec<f64> {
        let h = (self.len / 2) as f64;
        let xs: Vec<f64> = (0..self.len).map(|i| (i as f64 - h) * self.dt).collect();
        fornberg(0.0, &xs, order)
    }

    fn zeros_like(&self, f: &ScalarField) -> ScalarField {
        f.map(|_| 0.0)
    }

    /// `∂ₜ^order` of a derived interior field at the center.
    pub fn d(&self, order: usize, f: impl Fn(&State) -> ScalarField) -> Result<ScalarField, DiagnosticsError> {
        self.require(order)?;
        if order == 0 {
            return Ok(f(&self.states[self.len / 2]));
        }
        let w = self.weights(order);
        let c = f(&self.states[self.len / 2]);
        let mut out = self.zeros_like(&c);
        for (i, (s, k)) in self.states.iter().zip(&w).enumerate() {
            if i != self.len / 2 {
                out.axpy(*k, &(&f(s) - &c));
            }
        }
        Ok(out)
    }

    /// `∂ₜ^order` of a derived boundary field at the center.
    pub fn d_boundary(&self, order: usize, f: impl Fn(&State) -> BoundaryField) -> Result<BoundaryField, DiagnosticsError> {
        self.require(order)?;
        let c = f(&self.states[self.len / 2]);
        if order == 0 {
            return Ok(c);
        }
        let mut out = c.map(|_| 0.0);
        for (i, (s, k)) in self.states.iter().zip(self.weights(order)).enumerate() {
            if i != self.len / 2 {
                out.axpy(k, &(&f(s) - &c));
            }
        }
        Ok(out)
    }

    /// `∂ₜ^order` of a scalar time series at the center.
    pub fn d_scalar(&self, order: usize, f: impl Fn(&State) -> f64) -> Result<f64, DiagnosticsError> {
        self.require(order)?;
        if order == 0 {
            return Ok(f(&self.states[self.len / 2]));
        }
        // Differences against the center make constant series exactly stationary.
        let c = f(&self.states[self.len / 2]);
        Ok(self.states.iter().zip(self.weights(order)).map(|(s, k)| k * (f(s) - c)).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_five_point_weights() {
        let xs = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w1 = fornberg(0.0, &xs, 1);
        let e1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        let w2 = fornberg(0.0, &xs, 2);
        let e2 = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for i in 0..5 {
            assert!((w1[i] - e1[i]).abs() < 1e-15 && (w2[i] - e2[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn weights_differentiate_polynomials_exactly() {
        let xs: Vec<f64> = (0..9).map(|i| (i as f64 - 4.0) * 0.1).collect();
        for order in 0..=4 {
            let w = fornberg(0.0, &xs, order);
            for p in 0..9 {
                let got: f64 = w.iter().zip(&xs).map(|(c, x)| c * x.powi(p as i32)).sum();
                let want = if p == order { (1..=order).product::<usize>() as f64 } else { 0.0 };
                assert!((got - want).abs() < 1e-7, "order {order} power {p}: {got}");
            }
        }
    }

    #[test]
    fn window_lengths() {
        assert_eq!(JetWindow::length_for(1), 5);
        assert_eq!(JetWindow::length_for(3), 7);
        assert_eq!(JetWindow::length_for(4), 9);
    }
}
