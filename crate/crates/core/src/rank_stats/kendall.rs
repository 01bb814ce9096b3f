use crate::error::{Error, Result};

use super::{check_pair, CorrelationMethod, CorrelationResult};

/// Kendall's tau-b, computed in O(n log n) by counting merge-sort exchanges.
#[derive(Debug, Clone, Copy, Default)]
pub struct KendallTau;

impl CorrelationMethod for KendallTau {
    fn name(&self) -> &'static str {
        "kendall"
    }

    fn is_rank_based(&self) -> bool {
        true
    }

    fn estimate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        check_pair(x, y)?;
        let counts = PairCounts::compute(x, y);
        if counts.total == counts.tied_x {
            return Err(Error::Degenerate("x is all tied".into()));
        }
        if counts.total == counts.tied_y {
            return Err(Error::Degenerate("y is all tied".into()));
        }
        Ok(counts.tau_b())
    }
}

pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    KendallTau.correlate(x, y)
}

struct PairCounts {
    total: u64,
    tied_x: u64,
    tied_y: u64,
    /// concordant minus discordant
    score: i64,
}

fn tied_pairs(run: u64) -> u64 {
    run * (run - 1) / 2
}

impl PairCounts {
    fn compute(x: &[f64], y: &[f64]) -> Self {
        let n = x.len();
        let x: Vec<f64> = x.iter().map(|v| v + 0.0).collect();
        let y: Vec<f64> = y.iter().map(|v| v + 0.0).collect();

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by(|&a, &b| x[a].total_cmp(&x[b]).then(y[a].total_cmp(&y[b])));

        let mut tied_x = 0u64;
        let mut tied_xy = 0u64;
        let (mut run_x, mut run_xy) = (1u64, 1u64);
        for w in order.windows(2) {
            let (p, c) = (w[0], w[1]);
            if x[p] == x[c] {
                run_x += 1;
                if y[p] == y[c] {
                    run_xy += 1;
                } else {
                    tied_xy += tied_pairs(run_xy);
                    run_xy = 1;
                }
            } else {
                tied_x += tied_pairs(run_x);
                tied_xy += tied_pairs(run_xy);
                run_x = 1;
                run_xy = 1;
            }
        }
        tied_x += tied_pairs(run_x);
        tied_xy += tied_pairs(run_xy);

        let swaps = sort_counting_swaps(&mut order, &y);

        let mut tied_y = 0u64;
        let mut run_y = 1u64;
        for w in order.windows(2) {
            if y[w[0]] == y[w[1]] {
                run_y += 1;
            } else {
                tied_y += tied_pairs(run_y);
                run_y = 1;
            }
        }
        tied_y += tied_pairs(run_y);

        let total = tied_pairs(n as u64);
        let score = total as i64 - tied_x as i64 - tied_y as i64 + tied_xy as i64 - 2 * swaps as i64;
        Self {
            total,
            tied_x,
            tied_y,
            score,
        }
    }

    fn tau_b(&self) -> f64 {
        let denom = ((self.total - self.tied_x) as f64 * (self.total - self.tied_y) as f64).sqrt();
        (self.score as f64 / denom).clamp(-1.0, 1.0)
    }
}

/// Bottom-up merge sort of `idx` by `key`, returning the number of
/// strictly inverted pairs (equal keys are not counted).
fn sort_counting_swaps(idx: &mut Vec<usize>, key: &[f64]) -> u64 {
    let n = idx.len();
    let mut buf = vec![0usize; n];
    let mut swaps = 0u64;
    let mut width = 1;
    while width < n {
        for lo in (0..n).step_by(2 * width) {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if key[idx[j]] < key[idx[i]] {
                    buf[k] = idx[j];
                    swaps += (mid - i) as u64;
                    j += 1;
                } else {
                    buf[k] = idx[i];
                    i += 1;
                }
                k += 1;
            }
            buf[k..k + mid - i].copy_from_slice(&idx[i..mid]);
            k += mid - i;
            buf[k..k + hi - j].copy_from_slice(&idx[j..hi]);
        }
        std::mem::swap(idx, &mut buf);
        width *= 2;
    }
    swaps
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct O(n^2) count over all pairs.
    pub(crate) fn quadratic_tau_b(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let (mut score, mut tied_x, mut tied_y) = (0i64, 0u64, 0u64);
        for i in 0..n {
            for j in i + 1..n {
                let dx = x[i] - x[j];
                let dy = y[i] - y[j];
                if dx == 0.0 {
                    tied_x += 1;
                }
                if dy == 0.0 {
                    tied_y += 1;
                }
                let s = dx.signum() * dy.signum();
                if dx != 0.0 && dy != 0.0 {
                    score += s as i64;
                }
            }
        }
        let total = (n * (n - 1) / 2) as u64;
        let denom = ((total - tied_x) as f64 * (total - tied_y) as f64).sqrt();
        (score as f64 / denom).clamp(-1.0, 1.0)
    }

    #[test]
    fn comonotone() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(
            kendall_tau(&x, &[2.0, 4.0, 6.0, 8.0, 100.0]).unwrap().estimate,
            1.0
        );
        assert_eq!(
            kendall_tau(&x, &[5.0, 4.0, 3.0, 2.0, 1.0]).unwrap().estimate,
            -1.0
        );
    }

    #[test]
    fn three_pairs() {
        // (1,2) discordant, (1,3) and (2,3) concordant
        let r = kendall_tau(&[1.0, 2.0, 3.0], &[2.0, 1.0, 3.0]).unwrap();
        assert!((r.estimate - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tie_corrected() {
        let x = [1.0, 1.0, 2.0, 3.0];
        let y = [1.0, 2.0, 3.0, 4.0];
        let oracle = quadratic_tau_b(&x, &y);
        assert!((oracle - 5.0 / 30f64.sqrt()).abs() < 1e-15);
        assert_eq!(kendall_tau(&x, &y).unwrap().estimate, oracle);
    }

    #[test]
    fn all_tied_is_degenerate() {
        let err = kendall_tau(&[2.0; 4], &[1.0, 2.0, 3.0, 4.0]).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
        let err = kendall_tau(&[1.0, 2.0, 3.0, 4.0], &[0.0, -0.0, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    fn sample() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (3usize..500).prop_flat_map(|n| {
            let v = || prop::collection::vec(prop_oneof![(0i32..8).prop_map(f64::from), -50.0..50.0f64], n);
            (v(), v())
        })
    }

    proptest! {
        #[test]
        fn matches_quadratic_oracle((x, y) in sample()) {
            let fast = kendall_tau(&x, &y);
            let xs_tied = x.iter().all(|&a| a == x[0]);
            let ys_tied = y.iter().all(|&a| a == y[0]);
            if xs_tied || ys_tied {
                prop_assert!(fast.is_err());
            } else {
                prop_assert_eq!(fast.unwrap().estimate, quadratic_tau_b(&x, &y));
            }
        }

        #[test]
        fn symmetric((x, y) in sample()) {
            if let (Ok(a), Ok(b)) = (kendall_tau(&x, &y), kendall_tau(&y, &x)) {
                prop_assert_eq!(a.estimate, b.estimate);
            }
        }
    }
}
