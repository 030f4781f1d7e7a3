//! Sequence acceleration.

/// Wynn epsilon extrapolation of a sequence of partial sums.
///
/// Returns the deepest even-column entry of the epsilon table. Equal
/// neighbours in an even column mean the table has converged. Equal
/// neighbours in an odd column are a singularity; the table is then
/// rebuilt from the partial sums past it.
pub fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    match n {
        0 => return f64::NAN,
        1 | 2 => return partial_sums[n - 1],
        _ => {}
    }
    // prev = column k-1, cur = column k
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = partial_sums[n - 1];
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                if k % 2 == 0 && k > 0 {
                    return cur[i + 1];
                }
                return if n - (i + 1) >= 3 {
                    wynn_epsilon(&partial_sums[i + 1..])
                } else {
                    best
                };
            }
            if !diff.is_finite() {
                return best;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        k += 1;
        prev = cur;
        cur = next;
        if k % 2 == 0 {
            if let Some(&v) = cur.last() {
                if !v.is_finite() {
                    return best;
                }
                best = v;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_is_summed_exactly() {
        let r: f64 = 0.9;
        let sums: Vec<f64> = (0..8)
            .scan(0.0, |s, k| {
                *s += r.powi(k);
                Some(*s)
            })
            .collect();
        assert!((wynn_epsilon(&sums) - 10.0).abs() < 1e-10);
    }

    #[test]
    fn polynomial_times_geometric_tail() {
        // sum_k (k+1)(k+2)/2 r^k = 1/(1-r)^3
        let r: f64 = 0.85;
        let sums: Vec<f64> = (0..30)
            .scan(0.0, |s, k| {
                let k = k as f64;
                *s += (k + 1.0) * (k + 2.0) / 2.0 * r.powf(k);
                Some(*s)
            })
            .collect();
        let exact = 1.0 / (1.0 - r).powi(3);
        let raw_err = (sums[29] - exact).abs() / exact;
        let acc_err = (wynn_epsilon(&sums) - exact).abs() / exact;
        assert!(raw_err > 1e-4);
        assert!(acc_err < 1e-10, "{acc_err}");
    }

    #[test]
    fn equal_terms_do_not_stop_the_table() {
        // terms (k+1)(k+2)/2 * 0.9^k tie at k = 17
        let r: f64 = 0.9;
        let sums: Vec<f64> = (0..60)
            .scan(0.0, |s, k| {
                let k = k as f64;
                *s += (k + 1.0) * (k + 2.0) / 2.0 * r.powf(k);
                Some(*s)
            })
            .collect();
        let acc = wynn_epsilon(&sums);
        assert!((acc - 1000.0).abs() / 1000.0 < 1e-8, "{acc}");
    }

    #[test]
    fn short_sequences() {
        assert!(wynn_epsilon(&[]).is_nan());
        assert_eq!(wynn_epsilon(&[1.0, 2.0]), 2.0);
        assert_eq!(wynn_epsilon(&[1.0, 1.0, 1.0]), 1.0);
    }
}
