use apev_discretization::{Grid, ScalarField};

/// Arithmetic needed by the fluid right-hand side.
///
/// Implemented by plain grid fields for time stepping and by truncated
/// time-Taylor series for the initial jet, so both evaluate the same formula.
pub trait FieldAlgebra: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, c: f64) -> Self;
    /// `f ∘ self`, where `f(x, n)` is the `n`-th derivative of `f` at `x`.
    fn compose(&self, f: &dyn Fn(f64, usize) -> f64) -> Self;
    /// `[∂₁, ∂₂, ∂₃]`.
    fn grad(&self, grid: &Grid) -> [Self; 3];
    fn dealias(&self, grid: &Grid) -> Self;

    fn recip(&self) -> Self {
        self.compose(&|x, n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * (1..=n).product::<usize>() as f64 / x.powi(n as i32 + 1)
        })
    }
}

impl FieldAlgebra for ScalarField {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn compose(&self, f: &dyn Fn(f64, usize) -> f64) -> Self {
        self.map(|x| f(x, 0))
    }
    fn grad(&self, grid: &Grid) -> [Self; 3] {
        grid.grad(self)
    }
    fn dealias(&self, grid: &Grid) -> Self {
        grid.dealias(self)
    }
    fn recip(&self) -> Self {
        self.map(|x| 1.0 / x)
    }
}
