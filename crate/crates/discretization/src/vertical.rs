//! Fourth-order vertical finite differences on a uniform node set.
//!
//! First derivative: centered `[1, -8, 0, 8, -1]/12` in the interior and
//! six-point one-sided rows at the two outermost nodes of each end. The
//! one-sided rows are the members of the fourth-order family whose free
//! coefficient keeps the semi-discrete advection operator (with the
//! boundary value injected) free of growing modes; the textbook choice
//! is not.

use nalgebra::{DMatrix, DVector};

/// A banded derivative operator described by its rows, already scaled by `1/hᵖ`.
#[derive(Clone, Debug)]
pub struct Stencil {
    interior: [f64; 5],
    /// Rows for nodes 0 and 1; both read nodes `0..width`.
    head: [Vec<f64>; 2],
    /// Rows for nodes `n-2` and `n-1`; both read nodes `n-width..n`.
    tail: [Vec<f64>; 2],
    n: usize,
}

// Six-point closures (n ≥ 6).
const D1_ROW0: [f64; 6] = [-31.0, 78.0, -96.0, 76.0, -33.0, 6.0];
const D1_ROW1: [f64; 6] = [-5.0, -25.0, 46.0, -22.0, 7.0, -1.0];
const D2_ROW0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
const D2_ROW1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
// Five-point closures, only for the minimal five-node grid.
const D1_ROW0_5: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const D1_ROW1_5: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
const D2_ROW0_5: [f64; 5] = [35.0, -104.0, 114.0, -56.0, 11.0];
const D2_ROW1_5: [f64; 5] = [11.0, -20.0, 6.0, 4.0, -1.0];

fn mirrored(r: &[f64], sign: f64) -> Vec<f64> {
    r.iter().rev().map(|c| sign * c).collect()
}

impl Stencil {
    /// First derivative on `n ≥ 5` nodes with spacing `h`.
    pub fn first(n: usize, h: f64) -> Self {
        assert!(n >= 5, "vertical stencils need at least five nodes");
        let s = 1.0 / (12.0 * h);
        let head = if n >= 6 {
            [
                D1_ROW0.iter().map(|c| c * s).collect::<Vec<_>>(),
                D1_ROW1.iter().map(|c| c * s / 2.0).collect(),
            ]
        } else {
            [
                D1_ROW0_5.iter().map(|c| c * s).collect(),
                D1_ROW1_5.iter().map(|c| c * s).collect(),
            ]
        };
        let tail = [mirrored(&head[1], -1.0), mirrored(&head[0], -1.0)];
        Self { interior: [s, -8.0 * s, 0.0, 8.0 * s, -s], head, tail, n }
    }

    /// Second derivative on `n ≥ 5` nodes with spacing `h`.
    pub fn second(n: usize, h: f64) -> Self {
        assert!(n >= 5, "vertical stencils need at least five nodes");
        let s = 1.0 / (12.0 * h * h);
        let head = if n >= 6 {
            [
                D2_ROW0.iter().map(|c| c * s).collect::<Vec<_>>(),
                D2_ROW1.iter().map(|c| c * s).collect(),
            ]
        } else {
            [
                D2_ROW0_5.iter().map(|c| c * s).collect(),
                D2_ROW1_5.iter().map(|c| c * s).collect(),
            ]
        };
        let tail = [mirrored(&head[1], 1.0), mirrored(&head[0], 1.0)];
        Self {
            interior: [-s, 16.0 * s, -30.0 * s, 16.0 * s, -s],
            head,
            tail,
            n,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Row `i` as `(first column, coefficients)`.
    pub fn row(&self, i: usize) -> (usize, &[f64]) {
        let n = self.n;
        match i {
            0 | 1 => (0, &self.head[i][..]),
            _ if i + 2 >= n => {
                let r = &self.tail[i + 2 - n];
                (n - r.len(), &r[..])
            }
            _ => (i - 2, &self.interior[..]),
        }
    }

    /// Applies the operator along a strided axis: `data` holds `n` blocks of
    /// length `block`, and the derivative is taken across blocks.
    pub fn apply_blocks(&self, data: &[f64], block: usize, out: &mut [f64]) {
        debug_assert_eq!(data.len(), self.n * block);
        debug_assert_eq!(out.len(), data.len());
        for i in 0..self.n {
            let (start, coefs) = self.row(i);
            let dst = &mut out[i * block..(i + 1) * block];
            dst.iter_mut().for_each(|x| *x = 0.0);
            // Rows sum to zero, so differencing against one node of the row
            // makes constants map to exactly zero.
            let reference = &data[start * block..(start + 1) * block];
            for (j, &c) in coefs.iter().enumerate().skip(1) {
                if c == 0.0 {
                    continue;
                }
                let src = &data[(start + j) * block..(start + j + 1) * block];
                for ((d, s), r) in dst.iter_mut().zip(src).zip(reference) {
                    *d += c * (s - r);
                }
            }
        }
    }

    /// Applies the operator to a single column.
    pub fn apply(&self, column: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; column.len()];
        self.apply_blocks(column, 1, &mut out);
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let (start, coefs) = self.row(i);
            for (j, &c) in coefs.iter().enumerate() {
                m[(i, start + j)] = c;
            }
        }
        m
    }
}

/// `(D₂ − κ)` on the interior rows with Dirichlet rows at both ends.
pub fn helmholtz_dirichlet(d2: &Stencil, kappa: f64) -> DMatrix<f64> {
    let n = d2.len();
    let mut m = d2.to_dense();
    for i in 0..n {
        m[(i, i)] -= kappa;
    }
    for j in 0..n {
        m[(0, j)] = 0.0;
        m[(n - 1, j)] = 0.0;
    }
    m[(0, 0)] = 1.0;
    m[(n - 1, n - 1)] = 1.0;
    m
}

/// Solves `(D₂ − κ)u = rhs` in the interior with `u(0) = lo`, `u(1) = hi`.
pub fn solve_two_point(d2: &Stencil, kappa: f64, rhs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let n = d2.len();
    let mut b = DVector::from_column_slice(rhs);
    b[0] = lo;
    b[n - 1] = hi;
    let lu = helmholtz_dirichlet(d2, kappa).lu();
    lu.solve(&b)
        .expect("two-point Helmholtz operator is nonsingular for κ ≥ 0")
        .as_slice()
        .to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn first_derivative_reproduces_quartics() {
        let n = 11;
        let x = nodes(n);
        let d = Stencil::first(n, 1.0 / (n - 1) as f64);
        for p in 0..=4 {
            let f: Vec<f64> = x.iter().map(|t| t.powi(p)).collect();
            let df = d.apply(&f);
            for (xi, dfi) in x.iter().zip(&df) {
                let exact = if p == 0 { 0.0 } else { p as f64 * xi.powi(p - 1) };
                assert!((dfi - exact).abs() < 1e-11, "p={p}: {dfi} vs {exact}");
            }
        }
    }

    #[test]
    fn second_derivative_reproduces_quintics() {
        let n = 9;
        let x = nodes(n);
        let d = Stencil::second(n, 1.0 / (n - 1) as f64);
        for p in 0..=5 {
            let f: Vec<f64> = x.iter().map(|t| t.powi(p)).collect();
            let df = d.apply(&f);
            for (xi, dfi) in x.iter().zip(&df) {
                let exact = if p < 2 { 0.0 } else { (p * (p - 1)) as f64 * xi.powi(p - 2) };
                assert!((dfi - exact).abs() < 1e-9, "p={p}: {dfi} vs {exact}");
            }
        }
    }

    #[test]
    fn constant_has_zero_derivative() {
        let d = Stencil::first(8, 1.0 / 7.0);
        assert!(d.apply(&[3.0; 8]).iter().all(|v| *v == 0.0));
        let d2 = Stencil::second(8, 1.0 / 7.0);
        assert!(d2.apply(&[-1.5; 8]).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn second_derivative_of_sine_converges_at_fourth_order() {
        let err = |n: usize| {
            let x = nodes(n);
            let d = Stencil::second(n, 1.0 / (n - 1) as f64);
            let f: Vec<f64> = x.iter().map(|t| (std::f64::consts::PI * t).sin()).collect();
            let pi2 = std::f64::consts::PI.powi(2);
            d.apply(&f)
                .iter()
                .zip(&f)
                .map(|(a, b)| (a + pi2 * b).abs())
                .fold(0.0, f64::max)
        };
        let order = (err(33) / err(65)).log2();
        assert!(order > 3.5, "observed order {order}");
    }

    #[test]
    fn two_point_solve_matches_sinh_profile() {
        let n = 65;
        let d2 = Stencil::second(n, 1.0 / 64.0);
        let u = solve_two_point(&d2, 1.0, &vec![0.0; n], 0.0, 1.0);
        let err = nodes(n)
            .iter()
            .zip(&u)
            .map(|(x, ui)| (ui - x.sinh() / 1f64.sinh()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }
}
