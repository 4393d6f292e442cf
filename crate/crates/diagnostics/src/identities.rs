//! Residuals of the transport, hyperbolic, vorticity and divergence identities.

use apev_discretization::{BoundaryField, Grid, ScalarField, Side, VectorField};
use apev_geometry::HarmonicExtension;
use apev_solver::{PressureLaw, State};

use crate::kinematics::{self as kin, dot};
use crate::{DiagnosticsError, JetWindow};

/// `Qf = f_t + U·∇f`, the ALE material derivative.
pub fn apply_q(grid: &Grid, state: &State, f: &ScalarField, f_t: &ScalarField) -> ScalarField {
    f_t + &kin::advect(grid, &kin::transport(state), f)
}

/// Maxima of `|(v − η_t)ᵢa₃ᵢ|` over `(Γ₀, Γ₁)`.
pub fn tangency_residual(grid: &Grid, state: &State) -> (f64, f64) {
    let w = &kin::transport(state)[2];
    (grid.trace(w, Side::Bottom).max_abs(), grid.trace(w, Side::Top).max_abs())
}

/// Residuals of the hyperbolic equation for `g = log R`.
#[derive(Clone, Debug)]
pub struct GResidual {
    /// `Q²g − div_a(f∇_a g) − F`
    pub interior: ScalarField,
    /// `f∇_a g·ν − h` on Γ₁.
    pub top: BoundaryField,
    /// `∂₃g` on Γ₀.
    pub bottom: BoundaryField,
}

impl GResidual {
    /// `L²` norms of `(interior, Γ₁, Γ₀)`.
    pub fn norms(&self, grid: &Grid) -> (f64, f64, f64) {
        let b = |f: &BoundaryField| grid.integrate_boundary(&f.map(|x| x * x)).sqrt();
        (apev_discretization::norms::l2_quadrature(grid, &self.interior), b(&self.top), b(&self.bottom))
    }
}

fn log_r(s: &State) -> ScalarField {
    s.r.map(f64::ln)
}

/// `Q²g − div_a(f∇_a g) − F` with `f = q'(R)`,
/// `F = −(Qa_{mi})∂ₘvᵢ + a_{mi}∂ₘUₖ ∂ₖvᵢ`, and the two boundary residuals.
pub fn g_equation_residual(
    grid: &Grid,
    law: &PressureLaw,
    window: &JetWindow,
) -> Result<GResidual, DiagnosticsError> {
    let s = window.center()?;
    let maps = &s.maps;
    let g = log_r(s);
    let g_t = window.d(1, log_r)?;
    let g_tt = window.d(2, log_r)?;
    let u = kin::transport(s);
    let u_t: VectorField = [window.d(1, |x| x.v[0].clone())?, window.d(1, |x| x.v[1].clone())?, window.d(1, |x| kin::transport(x)[2].clone())?];

    let dg = grid.grad(&g);
    let hess: [VectorField; 3] = std::array::from_fn(|k| grid.grad(&dg[k]));
    let du: [VectorField; 3] = std::array::from_fn(|k| grid.grad(&u[k]));

    let mut qq = g_tt;
    qq += &(&kin::advect(grid, &u, &g_t) * 2.0);
    qq += &dot(&u_t, &dg);
    for k in 0..3 {
        for m in 0..3 {
            qq += &(&(&u[k] * &du[k][m]) * &dg[m]);
            qq += &(&(&u[k] * &u[m]) * &hess[k][m]);
        }
    }

    let f = s.r.map(|x| law.dq(x, 1));
    let ag = kin::grad_a(grid, maps, &g);
    let flux: VectorField = std::array::from_fn(|i| &f * &ag[i]);
    let elliptic = kin::div_a(grid, maps, &flux);

    let dv: [VectorField; 3] = std::array::from_fn(|i| grid.grad(&s.v[i]));
    let a_t = kin::a3_rate(grid, maps);
    let mut forcing = grid.zeros();
    for i in 0..3 {
        let qa = &a_t[i] + &kin::advect(grid, &u, &maps.a3[i]);
        forcing -= &(&qa * &dv[i][2]);
    }
    for k in 0..3 {
        let au = kin::grad_a(grid, maps, &u[k]);
        for i in 0..3 {
            forcing += &(&au[i] * &dv[i][k]);
        }
    }

    let mut interior = qq;
    interior -= &elliptic;
    interior -= &forcing;

    let w_tt = window.d_boundary(1, |x| x.w_t.clone())?;
    let mut top = grid.trace(&dot(&flux, &maps.b3), Side::Top);
    top -= &h_boundary(grid, s, &w_tt);
    let bottom = grid.trace(&dg[2], Side::Bottom);
    Ok(GResidual { interior, top, bottom })
}

/// `h = ∂ₜb₃ᵢvᵢ − w_tt + Σⱼ vⱼ∂ⱼb₃ᵢ vᵢ − Σⱼ vⱼ∂ⱼw_t` on Γ₁.
pub fn h_boundary(grid: &Grid, s: &State, w_tt: &BoundaryField) -> BoundaryField {
    let v = kin::trace3(grid, &s.v, Side::Top);
    let dwt = [grid.deriv_tangential_boundary(&s.w_t, 1, 1), grid.deriv_tangential_boundary(&s.w_t, 2, 1)];
    let mut h = -w_tt;
    for j in 0..2 {
        // ∂ₜb₃ⱼ = −∂ⱼw_t
        h -= &(&dwt[j] * &v[j]);
        h -= &(&v[j] * &dwt[j]);
        for i in 0..2 {
            let dnu = grid.deriv_tangential_boundary(&s.maps.nu[i], j + 1, 1);
            h += &(&(&v[j] * &dnu) * &v[i]);
        }
    }
    h
}

/// Interior extension of `h`: `w_t, w_tt` replaced by `ψ_t` and `ψ_tt = E(w_tt)`.
pub fn h_extension(
    grid: &Grid,
    ext: &HarmonicExtension,
    window: &JetWindow,
) -> Result<ScalarField, DiagnosticsError> {
    let s = window.center()?;
    let w_tt = window.d_boundary(1, |x| x.w_t.clone())?;
    let psi_tt = ext.extend(grid, &w_tt)?;
    let b_t = kin::b3_rate(grid, &s.maps);
    let dpt = grid.grad_h(&s.maps.psi_t);
    let mut h = dot(&b_t, &s.v);
    h -= &psi_tt;
    for j in 0..2 {
        for i in 0..2 {
            let db = grid.deriv_tangential(&s.maps.b3[i], j + 1, 1);
            h += &(&(&s.v[j] * &db) * &s.v[i]);
        }
        h -= &(&s.v[j] * &dpt[j]);
    }
    Ok(h)
}

/// Vorticity `ζ = curl_a v` at the window center and the residual of
/// `Qζᵢ − ζ_l a_{kl}∂ₖvᵢ + (div_a v)ζᵢ = 0`.
pub fn vorticity_and_residual(
    grid: &Grid,
    window: &JetWindow,
) -> Result<(VectorField, VectorField), DiagnosticsError> {
    let s = window.center()?;
    let zeta = kin::curl_a(grid, &s.maps, &s.v);
    let ja = kin::jacobian_a(grid, &s.maps, &s.v);
    let div = &(&ja[0][0] + &ja[1][1]) + &ja[2][2];
    let u = kin::transport(s);
    let mut res: VectorField = std::array::from_fn(|_| grid.zeros());
    for i in 0..3 {
        let z_t = window.d(1, |x| kin::curl_a(grid, &x.maps, &x.v)[i].clone())?;
        let mut r = &z_t + &kin::advect(grid, &u, &zeta[i]);
        r -= &dot(&zeta, &ja[i]);
        r += &(&div * &zeta[i]);
        res[i] = r;
    }
    Ok((zeta, res))
}

/// `div_a v + (∂ₜR + U·∇R)/R`.
pub fn divergence_identity_residual(grid: &Grid, window: &JetWindow) -> Result<ScalarField, DiagnosticsError> {
    let s = window.center()?;
    let r_t = window.d(1, |x| x.r.clone())?;
    let qr = apply_q(grid, s, &s.r, &r_t);
    Ok(&kin::div_a(grid, &s.maps, &s.v) + &qr.zip_map(&s.r, |a, b| a / b))
}

/// `Qg + div_a v` with `g = log R`.
pub fn qg_residual(grid: &Grid, window: &JetWindow) -> Result<ScalarField, DiagnosticsError> {
    let s = window.center()?;
    let g_t = window.d(1, log_r)?;
    Ok(&apply_q(grid, s, &log_r(s), &g_t) + &kin::div_a(grid, &s.maps, &s.v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use apev_geometry::AleMaps;

    fn flat_state(g: &Grid, v: VectorField) -> State {
        let mut s = State::steady(g, 1.0);
        s.v = v;
        s
    }

    #[test]
    fn q_on_constants_and_hand_advection() {
        let g = Grid::new(16, 16, 9).unwrap();
        let s = flat_state(&g, [g.constant(1.0), g.zeros(), g.zeros()]);
        let c = apply_q(&g, &s, &g.constant(3.0), &g.zeros());
        assert_eq!(c.max_abs(), 0.0);
        let f = g.scalar(|x, _, _| x.sin());
        let qf = apply_q(&g, &s, &f, &g.zeros());
        assert!((&qf - &g.scalar(|x, _, _| x.cos())).max_abs() < 1e-13);
        let rest = State::steady(&g, 1.0);
        assert_eq!(apply_q(&g, &rest, &f, &g.zeros()).max_abs(), 0.0);
    }

    #[test]
    fn tangency_detects_normal_perturbation() {
        let g = Grid::new(8, 8, 17).unwrap();
        let ext = HarmonicExtension::new(&g);
        let w = g.boundary(Side::Top, |x, _| 0.05 * x.cos());
        let mut s = State::steady(&g, 1.0);
        s.maps = AleMaps::from_plate(&g, &ext, &w, &g.boundary_zeros(Side::Top)).unwrap();
        s.w = w;
        assert_eq!(tangency_residual(&g, &s), (0.0, 0.0));
        let delta = 1e-6;
        let top = g.layer(Side::Top);
        g.plane_mut(&mut s.v[2], top).iter_mut().for_each(|x| *x += delta);
        let (lo, hi) = tangency_residual(&g, &s);
        let jmax = g.trace(&s.maps.jac, Side::Top).data.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(lo, 0.0);
        assert!((hi - delta / jmax).abs() < 1e-15, "{hi}");
    }

    #[test]
    fn steady_window_gives_zero_residuals() {
        let g = Grid::new(8, 8, 9).unwrap();
        let ext = HarmonicExtension::new(&g);
        let law = PressureLaw::default();
        let mut win = JetWindow::new(5, 0.01);
        for n in 0..5 {
            let mut s = State::steady(&g, 1.0);
            s.t = n as f64 * 0.01;
            win.push(s);
        }
        let r = g_equation_residual(&g, &law, &win).unwrap();
        assert_eq!(r.norms(&g), (0.0, 0.0, 0.0));
        assert_eq!(h_extension(&g, &ext, &win).unwrap().max_abs(), 0.0);
        let (z, res) = vorticity_and_residual(&g, &win).unwrap();
        assert!(z.iter().chain(&res).all(|f| f.max_abs() == 0.0));
        assert_eq!(divergence_identity_residual(&g, &win).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn underfilled_window_is_an_error() {
        let g = Grid::new(8, 8, 9).unwrap();
        let mut win = JetWindow::new(5, 0.01);
        win.push(State::steady(&g, 1.0));
        assert!(matches!(divergence_identity_residual(&g, &win), Err(DiagnosticsError::Window { have: 1, .. })));
    }
}
