//! Weight multisets of `S^r V ⊗ S^s V*` and the finite-rank nonvanishing
//! certificate they support.

use super::EnvelopingError;
use crate::charcenter::Weight;
use crate::scalar::Q;
use std::collections::BTreeMap;

/// Finite multiset of integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMultiset {
    counts: BTreeMap<Vec<i64>, usize>,
}

impl WeightMultiset {
    pub fn counts(&self) -> &BTreeMap<Vec<i64>, usize> {
        &self.counts
    }

    pub fn multiplicity(&self, w: &[i64]) -> usize {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// The unique dominance-maximal element, if one exists.
    pub fn dominance_maximal(&self) -> Option<Vec<i64>> {
        let candidates: Vec<&Vec<i64>> = self.counts.keys().collect();
        let mut best: Option<&Vec<i64>> = None;
        for c in &candidates {
            if candidates.iter().all(|other| dominates(c, other)) {
                best = Some(c);
                break;
            }
        }
        best.cloned()
    }
}

/// Dominance order on equal-sum integer vectors: `a >= b` when every prefix
/// sum of `a - b` is nonnegative.
pub fn dominates(a: &[i64], b: &[i64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut prefix = 0i64;
    for (x, y) in a.iter().zip(b) {
        prefix += x - y;
        if prefix < 0 {
            return false;
        }
    }
    prefix == 0
}

/// Weights of `S^r V ⊗ S^s V*` for `gl_n`, with multiplicity: sums of `r`
/// basis weights minus sums of `s` basis weights.
pub fn tensor_weight_multiset(n: usize, r: usize, s: usize) -> WeightMultiset {
    assert!(n >= 1);
    let pos = symmetric_power_weights(n, r);
    let neg = symmetric_power_weights(n, s);
    let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for (wp, cp) in &pos {
        for (wn, cn) in &neg {
            let w: Vec<i64> = wp.iter().zip(wn).map(|(a, b)| a - b).collect();
            *counts.entry(w).or_insert(0) += cp * cn;
        }
    }
    WeightMultiset { counts }
}

/// Weights of `S^k V`: multisets of `k` basis indices.
fn symmetric_power_weights(n: usize, k: usize) -> Vec<(Vec<i64>, usize)> {
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    fn rec(n: usize, start: usize, left: usize, current: &mut Vec<i64>, out: &mut Vec<(Vec<i64>, usize)>) {
        if left == 0 {
            out.push((current.clone(), 1));
            return;
        }
        if start == n {
            return;
        }
        for take in (0..=left).rev() {
            current[start] += take as i64;
            rec(n, start + 1, left - take, current, out);
            current[start] -= take as i64;
        }
    }
    rec(n, 0, k, &mut current, &mut out);
    out
}

/// The finite-rank nonvanishing certificate: true exactly when
/// `lambda - mu` is integral, equals the top weight `r e_1 - s e_n` of
/// `S^r V ⊗ S^s V*`, and is dominant.
pub fn witness_weight_check(
    lambda: &Weight<Q>,
    mu: &Weight<Q>,
    r: usize,
    s: usize,
) -> Result<bool, EnvelopingError> {
    let n = lambda.rank();
    if mu.rank() != n {
        return Err(EnvelopingError::RankMismatch {
            left: n,
            right: mu.rank(),
        });
    }
    let diff: Vec<Q> = lambda
        .entries()
        .iter()
        .zip(mu.entries())
        .map(|(a, b)| a - b)
        .collect();
    // Integrality.
    if diff.iter().any(|d| !d.is_integer()) {
        return Ok(false);
    }
    let diff_int: Vec<i64> = diff
        .iter()
        .map(|d| {
            use num_traits::ToPrimitive;
            d.to_integer().to_i64().unwrap_or(i64::MAX)
        })
        .collect();
    let mut top = vec![0i64; n];
    top[0] += r as i64;
    top[n - 1] -= s as i64;
    if diff_int != top {
        return Ok(false);
    }
    // Dominance of the difference (non-increasing coordinates).
    Ok(diff_int.windows(2).all(|w| w[0] >= w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, qr};

    fn w(entries: &[i64]) -> Weight<Q> {
        Weight::new(entries.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn small_tensor_weights() {
        let ws = tensor_weight_multiset(2, 1, 1);
        assert_eq!(ws.multiplicity(&[0, 0]), 2);
        assert_eq!(ws.multiplicity(&[1, -1]), 1);
        assert_eq!(ws.multiplicity(&[-1, 1]), 1);
        assert_eq!(ws.total(), 4);
    }

    #[test]
    fn trivial_powers() {
        let ws = tensor_weight_multiset(3, 0, 0);
        assert_eq!(ws.total(), 1);
        assert_eq!(ws.multiplicity(&[0, 0, 0]), 1);
    }

    #[test]
    fn symmetric_square_weights() {
        let ws = tensor_weight_multiset(2, 2, 0);
        assert_eq!(ws.multiplicity(&[2, 0]), 1);
        assert_eq!(ws.multiplicity(&[1, 1]), 1);
        assert_eq!(ws.multiplicity(&[0, 2]), 1);
        assert_eq!(ws.total(), 3);
    }

    #[test]
    fn counting_invariant_and_maximum() {
        fn binom(n: usize, k: usize) -> usize {
            if k > n {
                return 0;
            }
            let mut acc = 1usize;
            for i in 0..k.min(n - k) {
                acc = acc * (n - i) / (i + 1);
            }
            acc
        }
        for n in 1..=4 {
            for r in 0..=3 {
                for s in 0..=3 {
                    let ws = tensor_weight_multiset(n, r, s);
                    assert_eq!(ws.total(), binom(n + r - 1, r) * binom(n + s - 1, s), "n={n} r={r} s={s}");
                    let mut top = vec![0i64; n];
                    top[0] += r as i64;
                    top[n - 1] -= s as i64;
                    assert_eq!(ws.dominance_maximal(), Some(top), "n={n} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn certificate_examples() {
        // lambda - mu = e_1 - e_n with r = s = 1.
        assert!(witness_weight_check(&w(&[5, 1, -1]), &w(&[4, 1, 0]), 1, 1).unwrap());
        // Equal weights, no tensor factors.
        assert!(witness_weight_check(&w(&[2, 2]), &w(&[2, 2]), 0, 0).unwrap());
        // The top weight of S^1 V is e_1, not 2 e_1.
        assert!(!witness_weight_check(&w(&[3, 1]), &w(&[1, 1]), 1, 0).unwrap());
        // Non-integral differences are rejected.
        let lam = Weight::new(vec![qr(3, 2), qi(0)]);
        assert!(!witness_weight_check(&lam, &w(&[1, 0]), 1, 0).unwrap());
        // Rank mismatch is an error.
        assert!(witness_weight_check(&w(&[1, 0]), &w(&[1, 0, 0]), 1, 0).is_err());
    }
}
