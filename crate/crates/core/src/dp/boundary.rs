/// `E[min(x, Bin(n, p))]`, the value of a single slot type with `x` slots
/// facing `n` periods of demand with per-period probability `p`.
pub fn boundary_binomial(p: f64, x: u32, n: usize) -> f64 {
    let p = p.clamp(0.0, 1.0);
    if x == 0 || n == 0 || p == 0.0 {
        return 0.0;
    }
    if x as usize >= n {
        return n as f64 * p;
    }
    if p == 1.0 {
        return f64::from(x);
    }
    binomial_pmf(n, p).iter().enumerate().map(|(k, &pk)| (k.min(x as usize) as f64) * pk).sum()
}

/// Probabilities of `Bin(n, p)` at `0..=n`, computed in log space.
pub(crate) fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    if p <= 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    if p >= 1.0 {
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0;
        return v;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut log_choose = 0.0;
    (0..=n)
        .map(|k| {
            if k > 0 {
                log_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
            }
            (log_choose + k as f64 * lp + (n - k) as f64 * lq).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        assert!((boundary_binomial(0.5, 1, 2) - 0.75).abs() < 1e-15);
        assert!((boundary_binomial(0.3, 5, 4) - 1.2).abs() < 1e-15);
        assert_eq!(boundary_binomial(0.3, 0, 4), 0.0);
        assert_eq!(boundary_binomial(1.0, 3, 10), 3.0);
    }

    #[test]
    fn one_slot_is_probability_of_any_demand() {
        for p in [0.1f64, 0.25, 0.5, 0.9] {
            for n in 1..30 {
                let expected = 1.0 - (1.0 - p).powi(n as i32);
                assert!((boundary_binomial(p, 1, n) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pmf_sums_to_one() {
        for n in [1usize, 5, 50, 400] {
            let s: f64 = binomial_pmf(n, 0.37).iter().sum();
            assert!((s - 1.0).abs() < 1e-10);
        }
    }
}
