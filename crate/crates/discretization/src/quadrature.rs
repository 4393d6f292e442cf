//! Vertical quadrature weights on `[0, 1]`.

/// Fourth-order weights for `n` uniform nodes on `[0, 1]`.
///
/// Uses the extended rule with end weights `3/8, 7/6, 23/24` when `n ≥ 6`,
/// composite Simpson for `n = 5`.
pub fn vertical_weights(n: usize) -> Vec<f64> {
    assert!(n >= 5, "need at least five nodes");
    let h = 1.0 / (n - 1) as f64;
    let mut w = vec![h; n];
    if n >= 6 {
        for (i, c) in [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0].iter().enumerate() {
            w[i] = c * h;
            w[n - 1 - i] = c * h;
        }
    } else {
        w = [1.0, 4.0, 2.0, 4.0, 1.0].iter().map(|c| c * h / 3.0).collect();
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_cubics_exactly() {
        for n in [5, 6, 7, 17, 33] {
            let w = vertical_weights(n);
            for p in 0..=3 {
                let s: f64 = w.iter().enumerate().map(|(i, wi)| wi * (i as f64 / (n - 1) as f64).powi(p)).sum();
                assert!((s - 1.0 / (p + 1) as f64).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn fourth_order_on_smooth_integrand() {
        let err = |n: usize| {
            let w = vertical_weights(n);
            let s: f64 = w.iter().enumerate().map(|(i, wi)| wi * (i as f64 / (n - 1) as f64).exp()).sum();
            (s - (1f64.exp() - 1.0)).abs()
        };
        let order = (err(17) / err(33)).log2();
        assert!(order > 3.7, "{order}");
    }
}
