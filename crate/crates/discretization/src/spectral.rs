//! Two-dimensional FFTs over horizontal planes.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse 2D transforms for an `n1 × n2` plane stored with `x₂` fastest.
///
/// The forward transform is unnormalized; the inverse divides by `n1·n2`, so
/// spectral coefficients returned by [`Plane2d::forward_normalized`] are the
/// Fourier coefficients `f̂_k` of `f = Σ f̂_k e^{ik·x}`.
#[derive(Clone)]
pub struct Plane2d {
    n1: usize,
    n2: usize,
    fwd1: Arc<dyn Fft<f64>>,
    fwd2: Arc<dyn Fft<f64>>,
    inv1: Arc<dyn Fft<f64>>,
    inv2: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Plane2d {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Plane2d").field("n1", &self.n1).field("n2", &self.n2).finish()
    }
}

impl Plane2d {
    pub fn new(n1: usize, n2: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n1,
            n2,
            fwd1: planner.plan_fft_forward(n1),
            fwd2: planner.plan_fft_forward(n2),
            inv1: planner.plan_fft_inverse(n1),
            inv2: planner.plan_fft_inverse(n2),
        }
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn transform(&self, buf: &mut [Complex64], along2: &Arc<dyn Fft<f64>>, along1: &Arc<dyn Fft<f64>>) {
        let (n1, n2) = (self.n1, self.n2);
        along2.process(buf);
        let mut col = vec![Complex64::default(); n1];
        for i2 in 0..n2 {
            for i1 in 0..n1 {
                col[i1] = buf[i1 * n2 + i2];
            }
            along1.process(&mut col);
            for i1 in 0..n1 {
                buf[i1 * n2 + i2] = col[i1];
            }
        }
    }

    /// Fourier coefficients of a real plane.
    pub fn forward_normalized(&self, plane: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = plane.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.transform(&mut buf, &self.fwd2, &self.fwd1);
        let s = 1.0 / self.len() as f64;
        buf.iter_mut().for_each(|c| *c *= s);
        buf
    }

    /// Synthesizes `Σ f̂_k e^{ik·x}` in place.
    pub fn synthesize(&self, coeffs: &mut [Complex64]) {
        self.transform(coeffs, &self.inv2, &self.inv1);
    }
}

/// Integer wavenumbers in FFT order for an even `n`: `0, 1, …, n/2−1, −n/2, …, −1`.
pub fn wavenumbers(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i < n / 2 { i as f64 } else { i as f64 - n as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_identity() {
        let p = Plane2d::new(8, 6);
        let data: Vec<f64> = (0..48).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
        let mut c = p.forward_normalized(&data);
        p.synthesize(&mut c);
        for (a, b) in data.iter().zip(&c) {
            assert!((a - b.re).abs() < 1e-12 && b.im.abs() < 1e-12);
        }
    }

    #[test]
    fn single_mode_lands_in_its_bin() {
        let (n1, n2) = (8, 8);
        let p = Plane2d::new(n1, n2);
        let h = 2.0 * std::f64::consts::PI / 8.0;
        let mut data = vec![0.0; 64];
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                data[i1 * n2 + i2] = (2.0 * i1 as f64 * h + 3.0 * i2 as f64 * h).cos();
            }
        }
        let c = p.forward_normalized(&data);
        assert!((c[2 * n2 + 3].re - 0.5).abs() < 1e-14);
        assert!((c[6 * n2 + 5].re - 0.5).abs() < 1e-14);
    }
}
