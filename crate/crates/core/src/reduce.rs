//! Order-fixed floating-point reductions.
//!
//! Sums are evaluated over a balanced binary tree whose shape depends only
//! on the slice length, so results are bit-identical for any number of
//! worker threads.

const LEAF: usize = 64;
const PAR_THRESHOLD: usize = 1 << 14;

/// Pairwise sum over a fixed tree.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().fold(0.0, |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    let (lo, hi) = xs.split_at(mid);
    let (a, b) = if xs.len() >= PAR_THRESHOLD {
        rayon::join(|| pairwise_sum(lo), || pairwise_sum(hi))
    } else {
        (pairwise_sum(lo), pairwise_sum(hi))
    };
    a + b
}

/// `ln Σ exp(t_i)`; `-inf` for an empty slice.
pub fn log_sum_exp(ts: &[f64]) -> f64 {
    let max = ts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let shifted: Vec<f64> = ts.iter().map(|t| (t - max).exp()).collect();
    max + pairwise_sum(&shifted).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_count_does_not_change_bits() {
        let xs: Vec<f64> = (0..100_003).map(|i| ((i * 7919) % 1013) as f64 * 1e-3 + 1e-9 * i as f64).collect();
        let reference = pairwise_sum(&xs);
        for threads in [1, 2, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            assert_eq!(pool.install(|| pairwise_sum(&xs)).to_bits(), reference.to_bits());
        }
    }

    #[test]
    fn log_sum_exp_basics() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[0.0; 8]) - 8f64.ln()).abs() < 1e-15);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
