//! The tensor-product grid and the differential operators defined on it.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::field::{BoundaryField, ScalarField, Side};
use crate::quadrature::vertical_weights;
use crate::spectral::{wavenumbers, Plane2d};
use crate::vertical::Stencil;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("tangential sizes must be even and at least 4 (got N1 = {n1}, N2 = {n2})")]
    Tangential { n1: usize, n2: usize },
    #[error("vertical node count must be at least 5 (got N3 = {0})")]
    Vertical(usize),
}

/// `N1 × N2` Fourier nodes on the torus of period `2π` times `N3` uniform nodes on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct Grid {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub h3: f64,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub x3: Vec<f64>,
    /// Wavenumbers in FFT order.
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    quad: Vec<f64>,
    d1: Stencil,
    d2: Stencil,
    fft: Plane2d,
}

impl Grid {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self, GridError> {
        if n1 < 4 || n2 < 4 || n1 % 2 != 0 || n2 % 2 != 0 {
            return Err(GridError::Tangential { n1, n2 });
        }
        if n3 < 5 {
            return Err(GridError::Vertical(n3));
        }
        let h3 = 1.0 / (n3 - 1) as f64;
        let periodic = |n: usize| (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let mut x3: Vec<f64> = (0..n3).map(|i| i as f64 * h3).collect();
        x3[n3 - 1] = 1.0;
        Ok(Self {
            n1,
            n2,
            n3,
            h3,
            x1: periodic(n1),
            x2: periodic(n2),
            x3,
            k1: wavenumbers(n1),
            k2: wavenumbers(n2),
            quad: vertical_weights(n3),
            d1: Stencil::first(n3, h3),
            d2: Stencil::second(n3, h3),
            fft: Plane2d::new(n1, n2),
        })
    }

    /// Nodes per horizontal plane.
    pub fn plane_len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn len(&self) -> usize {
        self.plane_len() * self.n3
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i3 * self.n1 + i1) * self.n2 + i2
    }

    pub fn vertical_weights(&self) -> &[f64] {
        &self.quad
    }

    pub fn first_stencil(&self) -> &Stencil {
        &self.d1
    }

    pub fn second_stencil(&self) -> &Stencil {
        &self.d2
    }

    pub fn planes(&self) -> &Plane2d {
        &self.fft
    }

    /// `|k|²` for the spectral bin `b = i1·n2 + i2`.
    pub fn kappa(&self, b: usize) -> f64 {
        let (i1, i2) = (b / self.n2, b % self.n2);
        self.k1[i1] * self.k1[i1] + self.k2[i2] * self.k2[i2]
    }

    /// Whether bin `b` survives the two-thirds truncation.
    pub fn resolved(&self, b: usize) -> bool {
        let (i1, i2) = (b / self.n2, b % self.n2);
        3.0 * self.k1[i1].abs() < self.n1 as f64 && 3.0 * self.k2[i2].abs() < self.n2 as f64
    }

    // ---- construction -------------------------------------------------

    pub fn zeros(&self) -> ScalarField {
        ScalarField::constant(self.len(), 0.0)
    }

    pub fn constant(&self, c: f64) -> ScalarField {
        ScalarField::constant(self.len(), c)
    }

    pub fn scalar(&self, f: impl Fn(f64, f64, f64) -> f64) -> ScalarField {
        let mut data = Vec::with_capacity(self.len());
        for &z in &self.x3 {
            for &x in &self.x1 {
                for &y in &self.x2 {
                    data.push(f(x, y, z));
                }
            }
        }
        ScalarField::from_vec(data)
    }

    pub fn boundary(&self, side: Side, f: impl Fn(f64, f64) -> f64) -> BoundaryField {
        let mut data = Vec::with_capacity(self.plane_len());
        for &x in &self.x1 {
            for &y in &self.x2 {
                data.push(f(x, y));
            }
        }
        BoundaryField::from_vec(side, data)
    }

    pub fn boundary_zeros(&self, side: Side) -> BoundaryField {
        BoundaryField::constant(side, self.plane_len(), 0.0)
    }

    /// Field depending on `x₃` only.
    pub fn column(&self, profile: &[f64]) -> ScalarField {
        assert_eq!(profile.len(), self.n3);
        let p = self.plane_len();
        let mut data = Vec::with_capacity(self.len());
        for &v in profile {
            data.extend(std::iter::repeat(v).take(p));
        }
        ScalarField::from_vec(data)
    }

    // ---- planes and traces --------------------------------------------

    pub fn plane<'a>(&self, f: &'a ScalarField, i3: usize) -> &'a [f64] {
        let p = self.plane_len();
        &f.data[i3 * p..(i3 + 1) * p]
    }

    pub fn plane_mut<'a>(&self, f: &'a mut ScalarField, i3: usize) -> &'a mut [f64] {
        let p = self.plane_len();
        &mut f.data[i3 * p..(i3 + 1) * p]
    }

    pub fn layer(&self, side: Side) -> usize {
        match side {
            Side::Bottom => 0,
            Side::Top => self.n3 - 1,
        }
    }

    /// Restriction to the boundary node layer.
    pub fn trace(&self, f: &ScalarField, side: Side) -> BoundaryField {
        BoundaryField::from_vec(side, self.plane(f, self.layer(side)).to_vec())
    }

    /// Overwrites the boundary node layer.
    pub fn set_trace(&self, f: &mut ScalarField, b: &BoundaryField) {
        let layer = self.layer(b.side);
        self.plane_mut(f, layer).copy_from_slice(&b.data);
    }

    /// Smooth cutoff `ζ(x₃)`: equal to 1 for `x₃ ≥ 3/4` and 0 for `x₃ ≤ 1/2`
    /// (top), mirrored about `x₃ = 1/2` for the bottom.
    pub fn cutoff(&self, side: Side) -> ScalarField {
        let profile: Vec<f64> = self.x3.iter().map(|&z| cutoff_profile(side, z)).collect();
        self.column(&profile)
    }

    // ---- spectral operators -------------------------------------------

    /// Applies a spectral multiplier `m(k₁, k₂)` to every plane of `f`.
    pub fn apply_multiplier(&self, f: &ScalarField, m: impl Fn(f64, f64) -> Complex64) -> ScalarField {
        let mult = self.multiplier_table(m);
        let mut out = self.zeros();
        for i3 in 0..self.n3 {
            let mut c = self.fft.forward_normalized(self.plane(f, i3));
            c.iter_mut().zip(&mult).for_each(|(c, m)| *c *= m);
            self.fft.synthesize(&mut c);
            for (o, v) in self.plane_mut(&mut out, i3).iter_mut().zip(&c) {
                *o = v.re;
            }
        }
        out
    }

    pub fn apply_multiplier_boundary(&self, b: &BoundaryField, m: impl Fn(f64, f64) -> Complex64) -> BoundaryField {
        let mult = self.multiplier_table(m);
        let mut c = self.fft.forward_normalized(&b.data);
        c.iter_mut().zip(&mult).for_each(|(c, m)| *c *= m);
        self.fft.synthesize(&mut c);
        BoundaryField::from_vec(b.side, c.iter().map(|v| v.re).collect())
    }

    fn multiplier_table(&self, m: impl Fn(f64, f64) -> Complex64) -> Vec<Complex64> {
        let mut t = Vec::with_capacity(self.plane_len());
        for &a in &self.k1 {
            for &b in &self.k2 {
                t.push(m(a, b));
            }
        }
        t
    }

    /// Symbol of `∂_dir^order`, with the unpaired Nyquist bin removed for odd orders.
    fn derivative_symbol(&self, dir: usize, order: u32) -> impl Fn(f64, f64) -> Complex64 {
        let nyq = match dir {
            1 => -(self.n1 as f64) / 2.0,
            2 => -(self.n2 as f64) / 2.0,
            _ => panic!("tangential direction must be 1 or 2"),
        };
        move |a, b| {
            let k = if dir == 1 { a } else { b };
            if order % 2 == 1 && k == nyq {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(0.0, k).powu(order)
        }
    }

    /// Spectral `∂_dir^order f`, `dir ∈ {1, 2}`.
    pub fn deriv_tangential(&self, f: &ScalarField, dir: usize, order: u32) -> ScalarField {
        self.apply_multiplier(f, self.derivative_symbol(dir, order))
    }

    pub fn deriv_tangential_boundary(&self, b: &BoundaryField, dir: usize, order: u32) -> BoundaryField {
        self.apply_multiplier_boundary(b, self.derivative_symbol(dir, order))
    }

    /// `(∂₁f, ∂₂f)` from one forward and one inverse transform per plane.
    pub fn grad_h(&self, f: &ScalarField) -> [ScalarField; 2] {
        let (n1h, n2h) = (-(self.n1 as f64) / 2.0, -(self.n2 as f64) / 2.0);
        let mult = self.multiplier_table(|a, b| {
            let a = if a == n1h { 0.0 } else { a };
            let b = if b == n2h { 0.0 } else { b };
            // i·k₁ + i·(i·k₂): real part carries ∂₁, imaginary part ∂₂.
            Complex64::new(-b, a)
        });
        let mut d1 = self.zeros();
        let mut d2 = self.zeros();
        for i3 in 0..self.n3 {
            let mut c = self.fft.forward_normalized(self.plane(f, i3));
            c.iter_mut().zip(&mult).for_each(|(c, m)| *c *= m);
            self.fft.synthesize(&mut c);
            let p = self.plane_len();
            for (j, v) in c.iter().enumerate() {
                d1.data[i3 * p + j] = v.re;
                d2.data[i3 * p + j] = v.im;
            }
        }
        [d1, d2]
    }

    /// Two-thirds truncation.
    pub fn dealias(&self, f: &ScalarField) -> ScalarField {
        let mut out = self.zeros();
        for i3 in 0..self.n3 {
            let mut c = self.fft.forward_normalized(self.plane(f, i3));
            for (b, v) in c.iter_mut().enumerate() {
                if !self.resolved(b) {
                    *v = Complex64::new(0.0, 0.0);
                }
            }
            self.fft.synthesize(&mut c);
            for (o, v) in self.plane_mut(&mut out, i3).iter_mut().zip(&c) {
                *o = v.re;
            }
        }
        out
    }

    pub fn dealias_boundary(&self, b: &BoundaryField) -> BoundaryField {
        let mut c = self.fft.forward_normalized(&b.data);
        for (k, v) in c.iter_mut().enumerate() {
            if !self.resolved(k) {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        self.fft.synthesize(&mut c);
        BoundaryField::from_vec(b.side, c.iter().map(|v| v.re).collect())
    }

    /// Horizontal Laplacian `Δ_h` on a boundary field.
    pub fn laplacian_h(&self, b: &BoundaryField) -> BoundaryField {
        self.apply_multiplier_boundary(b, |a, c| Complex64::new(-(a * a + c * c), 0.0))
    }

    /// `Δ_h²` on a boundary field.
    pub fn bilaplacian_h(&self, b: &BoundaryField) -> BoundaryField {
        self.apply_multiplier_boundary(b, |a, c| Complex64::new((a * a + c * c).powi(2), 0.0))
    }

    /// Horizontal Laplacian of an interior field, plane by plane.
    pub fn laplacian_h_interior(&self, f: &ScalarField) -> ScalarField {
        self.apply_multiplier(f, |a, c| Complex64::new(-(a * a + c * c), 0.0))
    }

    // ---- vertical operators -------------------------------------------

    pub fn dz(&self, f: &ScalarField) -> ScalarField {
        let mut out = self.zeros();
        self.d1.apply_blocks(&f.data, self.plane_len(), &mut out.data);
        out
    }

    pub fn dzz(&self, f: &ScalarField) -> ScalarField {
        let mut out = self.zeros();
        self.d2.apply_blocks(&f.data, self.plane_len(), &mut out.data);
        out
    }

    /// Finite-difference `∂₃^order f`; orders 3 and 4 compose the first two.
    pub fn deriv_vertical(&self, f: &ScalarField, order: u32) -> ScalarField {
        match order {
            0 => f.clone(),
            1 => self.dz(f),
            2 => self.dzz(f),
            _ => self.deriv_vertical(&self.dzz(f), order - 2),
        }
    }

    /// `∂_k f` for `k ∈ {1, 2, 3}`.
    pub fn deriv(&self, f: &ScalarField, k: usize) -> ScalarField {
        match k {
            1 | 2 => self.deriv_tangential(f, k, 1),
            3 => self.dz(f),
            _ => panic!("axis must be 1, 2 or 3"),
        }
    }

    /// `[∂₁f, ∂₂f, ∂₃f]`.
    pub fn grad(&self, f: &ScalarField) -> [ScalarField; 3] {
        let [a, b] = self.grad_h(f);
        [a, b, self.dz(f)]
    }

    // ---- integration --------------------------------------------------

    /// `∫_Ω f`: spectral (trapezoid) tangentially, fourth-order vertically.
    pub fn integrate(&self, f: &ScalarField) -> f64 {
        let cell = 4.0 * PI * PI / self.plane_len() as f64;
        let mut total = 0.0;
        for (i3, w) in self.quad.iter().enumerate() {
            let s: f64 = self.plane(f, i3).iter().sum();
            total += w * s;
        }
        total * cell
    }

    /// `∫_Γ f` over one boundary torus.
    pub fn integrate_boundary(&self, b: &BoundaryField) -> f64 {
        let cell = 4.0 * PI * PI / self.plane_len() as f64;
        b.data.iter().sum::<f64>() * cell
    }
}

/// `C^∞` step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
fn smooth_step(t: f64) -> f64 {
    let bump = |s: f64| if s > 0.0 { (-1.0 / s).exp() } else { 0.0 };
    let (a, b) = (bump(t), bump(1.0 - t));
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// The cutoff profile used by [`Grid::cutoff`].
pub fn cutoff_profile(side: Side, x3: f64) -> f64 {
    match side {
        Side::Top => smooth_step((x3 - 0.5) * 4.0),
        Side::Bottom => smooth_step((0.5 - x3) * 4.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(16, 12, 17).unwrap()
    }

    #[test]
    fn invalid_sizes_are_rejected() {
        assert_eq!(Grid::new(5, 8, 9).unwrap_err(), GridError::Tangential { n1: 5, n2: 8 });
        assert_eq!(Grid::new(2, 8, 9).unwrap_err(), GridError::Tangential { n1: 2, n2: 8 });
        assert_eq!(Grid::new(8, 8, 4).unwrap_err(), GridError::Vertical(4));
        assert!(Grid::new(4, 4, 5).is_ok());
    }

    #[test]
    fn nodes_are_increasing_with_unit_endpoints() {
        let g = grid();
        assert_eq!(g.x3[0], 0.0);
        assert_eq!(*g.x3.last().unwrap(), 1.0);
        assert!(g.x3.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sine_derivative_is_exact() {
        let g = grid();
        let f = g.scalar(|x, _, _| x.sin());
        let df = g.deriv_tangential(&f, 1, 1);
        let exact = g.scalar(|x, _, _| x.cos());
        assert!((&df - &exact).max_abs() < 1e-13);
    }

    #[test]
    fn second_derivative_of_cos_2x2() {
        let g = grid();
        let f = g.scalar(|_, y, _| (2.0 * y).cos());
        let d = g.deriv_tangential(&f, 2, 2);
        let exact = g.scalar(|_, y, _| -4.0 * (2.0 * y).cos());
        assert!((&d - &exact).max_abs() < 1e-12);
    }

    #[test]
    fn combined_gradient_matches_separate_derivatives() {
        let g = grid();
        let f = g.scalar(|x, y, z| (x + 2.0 * y).sin() * z + (3.0 * x).cos() * (y).sin());
        let [a, b] = g.grad_h(&f);
        assert!((&a - &g.deriv_tangential(&f, 1, 1)).max_abs() < 1e-13);
        assert!((&b - &g.deriv_tangential(&f, 2, 1)).max_abs() < 1e-13);
    }

    #[test]
    fn vertical_derivative_of_square_is_exact() {
        let g = grid();
        let f = g.scalar(|_, _, z| z * z);
        let exact = g.scalar(|_, _, z| 2.0 * z);
        assert!((&g.dz(&f) - &exact).max_abs() < 1e-12);
        assert_eq!(g.dz(&g.constant(2.5)).max_abs(), 0.0);
    }

    #[test]
    fn traces_pick_boundary_layers() {
        let g = grid();
        let f = g.scalar(|x, _, z| x.cos() * z);
        let top = g.trace(&f, Side::Top);
        let exact = g.boundary(Side::Top, |x, _| x.cos());
        assert!((&top - &exact).max_abs() < 1e-15);
        assert_eq!(g.trace(&f, Side::Bottom).max_abs(), 0.0);
    }

    #[test]
    fn cutoff_profiles() {
        let g = Grid::new(4, 4, 65).unwrap();
        let top = g.trace(&g.cutoff(Side::Top), Side::Top);
        assert_eq!(top.data[0], 1.0);
        assert_eq!(cutoff_profile(Side::Top, 0.5), 0.0);
        assert_eq!(cutoff_profile(Side::Top, 0.3), 0.0);
        assert_eq!(cutoff_profile(Side::Bottom, 0.0), 1.0);
        assert_eq!(cutoff_profile(Side::Bottom, 0.7), 0.0);
        // ∫ ζ' = ζ(1) − ζ(0).
        let zt = g.cutoff(Side::Top);
        let zb = g.cutoff(Side::Bottom);
        let it = g.integrate(&g.dz(&zt)) / (4.0 * PI * PI);
        let ib = g.integrate(&g.dz(&zb)) / (4.0 * PI * PI);
        assert!((it - 1.0).abs() < 1e-3, "{it}");
        assert!((ib + 1.0).abs() < 1e-3, "{ib}");
    }

    #[test]
    fn dealias_removes_high_modes_only() {
        let g = Grid::new(12, 12, 5).unwrap();
        let low = g.scalar(|x, y, _| (3.0 * x).cos() * y.sin());
        let high = g.scalar(|x, _, _| (5.0 * x).cos());
        assert!((&g.dealias(&low) - &low).max_abs() < 1e-14);
        assert!(g.dealias(&high).max_abs() < 1e-14);
    }
}
