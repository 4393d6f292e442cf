use apev_discretization::{Grid, ScalarField};
use apev_solver::FieldAlgebra;

/// Truncated Taylor series in time, `Σⱼ cⱼ tʲ`, with field coefficients.
#[derive(Clone, Debug)]
pub struct Series(pub Vec<ScalarField>);

impl Series {
    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    fn lift(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        Series(self.0.iter().map(f).collect())
    }

    fn zip(&self, o: &Self, f: impl Fn(&ScalarField, &ScalarField) -> ScalarField) -> Self {
        assert_eq!(self.0.len(), o.0.len(), "series orders differ");
        Series(self.0.iter().zip(&o.0).map(|(a, b)| f(a, b)).collect())
    }
}

impl FieldAlgebra for Series {
    fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }
    fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }
    fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.0.len(), o.0.len(), "series orders differ");
        Series(
            (0..self.0.len())
                .map(|k| {
                    let mut acc = &self.0[0] * &o.0[k];
                    for j in 1..=k {
                        acc += &(&self.0[j] * &o.0[k - j]);
                    }
                    acc
                })
                .collect(),
        )
    }
    fn scale(&self, c: f64) -> Self {
        self.lift(|a| a * c)
    }
    /// `Σₙ f⁽ⁿ⁾(c₀)/n! · uⁿ` with `u = Σ_{j≥1} cⱼ tʲ`.
    fn compose(&self, f: &dyn Fn(f64, usize) -> f64) -> Self {
        let k = self.order();
        let c0 = &self.0[0];
        let mut u = self.clone();
        u.0[0] = c0.map(|_| 0.0);
        let mut power = Series(std::iter::once(c0.map(|_| 1.0)).chain((0..k).map(|_| c0.map(|_| 0.0))).collect());
        let mut out = power.lift(|p| p.map(|_| 0.0));
        let mut factorial = 1.0;
        for n in 0..=k {
            if n > 0 {
                power = power.mul(&u);
                factorial *= n as f64;
            }
            let d = c0.map(|x| f(x, n) / factorial);
            for (o, p) in out.0.iter_mut().zip(&power.0) {
                *o += &(&d * p);
            }
        }
        out
    }
    fn grad(&self, grid: &Grid) -> [Self; 3] {
        let g: Vec<[ScalarField; 3]> = self.0.iter().map(|c| grid.grad(c)).collect();
        std::array::from_fn(|i| Series(g.iter().map(|d| d[i].clone()).collect()))
    }
    fn dealias(&self, grid: &Grid) -> Self {
        self.lift(|a| grid.dealias(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_series(g: &Grid, c: &[f64]) -> Series {
        Series(c.iter().map(|&x| g.constant(x)).collect())
    }

    #[test]
    fn product_and_reciprocal_of_polynomials() {
        let g = Grid::new(4, 4, 5).unwrap();
        // (1 + t)(2 − t + t²) = 2 + t + 0t² + t³
        let p = constant_series(&g, &[1.0, 1.0, 0.0, 0.0]).mul(&constant_series(&g, &[2.0, -1.0, 1.0, 0.0]));
        let c: Vec<f64> = p.0.iter().map(|f| f.data[0]).collect();
        assert_eq!(c, vec![2.0, 1.0, 0.0, 1.0]);
        // 1/(1 − t) = 1 + t + t² + t³
        let r = constant_series(&g, &[1.0, -1.0, 0.0, 0.0]).recip();
        for f in &r.0 {
            assert!((f.data[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn composition_matches_power_series_of_exp() {
        let g = Grid::new(4, 4, 5).unwrap();
        // exp(1 + 2t) = e(1 + 2t + 2t² + 4t³/3)
        let s = constant_series(&g, &[1.0, 2.0, 0.0, 0.0]).compose(&|x, _| x.exp());
        let e = 1f64.exp();
        for (f, want) in s.0.iter().zip([e, 2.0 * e, 2.0 * e, 4.0 * e / 3.0]) {
            assert!((f.data[0] - want).abs() < 1e-14);
        }
    }
}
