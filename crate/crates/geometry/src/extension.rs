use std::collections::BTreeMap;

use apev_discretization::vertical::solve_two_point;
use apev_discretization::{norms, BoundaryField, Grid, ScalarField};
use num_complex::Complex64;

use crate::GeometryError;

/// Discrete harmonic extension from the top boundary, vanishing on the bottom.
///
/// Each tangential mode `e^{ik·x}` extends to `Φ_κ(x₃)e^{ik·x}` where
/// `(D₂ − κ)Φ_κ = 0`, `Φ_κ(0) = 0`, `Φ_κ(1) = 1`, `κ = |k|²`. The profiles
/// and their vertical derivatives `D₁Φ_κ` are computed once per grid.
#[derive(Clone, Debug)]
pub struct HarmonicExtension {
    bin_profile: Vec<usize>,
    phi: Vec<Vec<f64>>,
    dphi: Vec<Vec<f64>>,
}

/// An extended field with its three first derivatives.
#[derive(Clone, Debug)]
pub struct Extended {
    pub value: ScalarField,
    pub d: [ScalarField; 3],
}

impl HarmonicExtension {
    pub fn new(grid: &Grid) -> Self {
        let mut index: BTreeMap<u64, usize> = BTreeMap::new();
        let mut phi = Vec::new();
        let mut dphi = Vec::new();
        let mut bin_profile = Vec::with_capacity(grid.plane_len());
        for b in 0..grid.plane_len() {
            let kappa = grid.kappa(b);
            let key = kappa.round() as u64;
            let slot = *index.entry(key).or_insert_with(|| {
                let (p, dp) = if key == 0 {
                    (grid.x3.clone(), vec![1.0; grid.n3])
                } else {
                    let p = solve_two_point(grid.second_stencil(), kappa, &vec![0.0; grid.n3], 0.0, 1.0);
                    let dp = grid.first_stencil().apply(&p);
                    (p, dp)
                };
                phi.push(p);
                dphi.push(dp);
                phi.len() - 1
            });
            bin_profile.push(slot);
        }
        Self { bin_profile, phi, dphi }
    }

    /// Vertical profile used for spectral bin `b`.
    pub fn profile(&self, b: usize) -> &[f64] {
        &self.phi[self.bin_profile[b]]
    }

    fn coefficients(&self, grid: &Grid, top: &BoundaryField) -> Result<Vec<Complex64>, GeometryError> {
        if top.len() != grid.plane_len() {
            return Err(GeometryError::Shape { got: top.len(), expected: grid.plane_len() });
        }
        if let Some(i) = top.data.iter().position(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        Ok(grid.planes().forward_normalized(&top.data))
    }

    /// The extension of `top` into `Ω`.
    pub fn extend(&self, grid: &Grid, top: &BoundaryField) -> Result<ScalarField, GeometryError> {
        let c = self.coefficients(grid, top)?;
        let mut out = grid.zeros();
        let mut buf = vec![Complex64::default(); grid.plane_len()];
        for i3 in 0..grid.n3 {
            for (b, (o, cb)) in buf.iter_mut().zip(&c).enumerate() {
                *o = cb * self.phi[self.bin_profile[b]][i3];
            }
            grid.planes().synthesize(&mut buf);
            for (o, v) in grid.plane_mut(&mut out, i3).iter_mut().zip(&buf) {
                *o = v.re;
            }
        }
        Ok(out)
    }

    /// The extension together with `∂₁`, `∂₂` (spectral) and `∂₃ = D₁` of it.
    pub fn extend_with_derivatives(&self, grid: &Grid, top: &BoundaryField) -> Result<Extended, GeometryError> {
        let c = self.coefficients(grid, top)?;
        let (n1h, n2h) = (-(grid.n1 as f64) / 2.0, -(grid.n2 as f64) / 2.0);
        let tang: Vec<Complex64> = (0..grid.plane_len())
            .map(|b| {
                let (i1, i2) = (b / grid.n2, b % grid.n2);
                let k1 = if grid.k1[i1] == n1h { 0.0 } else { grid.k1[i1] };
                let k2 = if grid.k2[i2] == n2h { 0.0 } else { grid.k2[i2] };
                Complex64::new(-k2, k1)
            })
            .collect();
        let mut value = grid.zeros();
        let [mut d1, mut d2, mut d3] = [grid.zeros(), grid.zeros(), grid.zeros()];
        let p = grid.plane_len();
        let mut vz = vec![Complex64::default(); p];
        let mut xy = vec![Complex64::default(); p];
        for i3 in 0..grid.n3 {
            for b in 0..p {
                let s = self.bin_profile[b];
                let (f, df) = (self.phi[s][i3], self.dphi[s][i3]);
                // Real part: value; imaginary part: ∂₃.
                vz[b] = c[b] * Complex64::new(f, 0.0) + Complex64::i() * c[b] * df;
                xy[b] = c[b] * f * tang[b];
            }
            grid.planes().synthesize(&mut vz);
            grid.planes().synthesize(&mut xy);
            let r = i3 * p..(i3 + 1) * p;
            for (j, idx) in r.enumerate() {
                value.data[idx] = vz[j].re;
                d3.data[idx] = vz[j].im;
                d1.data[idx] = xy[j].re;
                d2.data[idx] = xy[j].im;
            }
        }
        Ok(Extended { value, d: [d1, d2, d3] })
    }
}

/// Ratios `‖E(w)‖_{H^{s+1/2}(Ω)} / ‖w‖_{Hˢ(Γ₁)}` over the nonzero samples.
pub fn elliptic_ratio_probe(
    grid: &Grid,
    ext: &HarmonicExtension,
    samples: &[BoundaryField],
    s: f64,
) -> Result<Vec<f64>, GeometryError> {
    let mut out = Vec::new();
    for w in samples {
        let denom = norms::boundary(grid, w, s)?;
        if denom == 0.0 {
            continue;
        }
        out.push(norms::interior(grid, &ext.extend(grid, w)?, s + 0.5)? / denom);
    }
    Ok(out)
}
