//! Random generators for the round-trip command and the test suites.
//!
//! Everything is driven by a caller-supplied RNG so runs are reproducible
//! from a seed.

use crate::charcenter::Weight;
use crate::expsum::Witness;
use crate::scalar::{qi, Q};
use num_bigint::BigInt;
use rand::Rng;

/// Random reduced rational with numerator magnitude and denominator bounded
/// by the given limits.
pub fn random_rational(rng: &mut impl Rng, max_numer: i64, max_denom: i64) -> Q {
    let numer = rng.gen_range(-max_numer..=max_numer);
    let denom = rng.gen_range(1..=max_denom);
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

/// Random reduced witness: up to `max_b` positive and `max_c` negative
/// nodes (multisets; repeats inside one side allowed), no node shared
/// between the two sides.
pub fn random_reduced_witness(
    rng: &mut impl Rng,
    max_b: usize,
    max_c: usize,
    max_numer: i64,
    max_denom: i64,
) -> Witness<Q> {
    let b_len = rng.gen_range(0..=max_b);
    let c_len = rng.gen_range(0..=max_c);
    loop {
        let b: Vec<Q> = (0..b_len).map(|_| random_rational(rng, max_numer, max_denom)).collect();
        let c: Vec<Q> = (0..c_len).map(|_| random_rational(rng, max_numer, max_denom)).collect();
        if b.iter().any(|x| c.contains(x)) {
            continue;
        }
        return Witness::reduced(b, c).normalized();
    }
}

/// Like [`random_reduced_witness`] but with a cap on the number of distinct
/// nodes, splitting the budget into forced repeats when necessary.
pub fn random_witness_with_distinct_bound(
    rng: &mut impl Rng,
    b_len: usize,
    c_len: usize,
    max_distinct: usize,
    max_numer: i64,
    max_denom: i64,
) -> Witness<Q> {
    assert!(max_distinct >= 1 || b_len + c_len == 0);
    loop {
        // Draw the distinct node pool first, then distribute multiplicities.
        let distinct = (b_len + c_len).min(max_distinct).max(usize::from(b_len + c_len > 0));
        let mut pool: Vec<Q> = Vec::new();
        while pool.len() < distinct {
            let x = random_rational(rng, max_numer, max_denom);
            if !pool.contains(&x) {
                pool.push(x);
            }
        }
        // Split the pool between the two sides.
        let b_distinct = if b_len == 0 {
            0
        } else {
            rng.gen_range(1..=b_len.min(pool.len().saturating_sub(usize::from(c_len > 0))).max(1))
        };
        if c_len > 0 && pool.len() - b_distinct == 0 {
            continue;
        }
        let mut b = Vec::with_capacity(b_len);
        let mut c = Vec::with_capacity(c_len);
        if b_len > 0 {
            for i in 0..b_len {
                b.push(pool[if i < b_distinct { i } else { rng.gen_range(0..b_distinct) }].clone());
            }
        }
        if c_len > 0 {
            let c_pool = &pool[b_distinct..];
            let c_distinct = c_len.min(c_pool.len());
            for i in 0..c_len {
                c.push(c_pool[if i < c_distinct { i } else { rng.gen_range(0..c_distinct) }].clone());
            }
        }
        let w = Witness::reduced(b, c).normalized();
        if w.r() == b_len && w.s() == c_len {
            return w;
        }
    }
}

/// Random integral weight of the given rank with entries in `lo..=hi`.
pub fn random_integral_weight(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Weight<Q> {
    Weight::new((0..n).map(|_| qi(rng.gen_range(lo..=hi))).collect())
}

/// Random integral weight with pairwise-distinct entries.
pub fn random_generic_integral_weight(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Weight<Q> {
    assert!((hi - lo + 1) as usize >= n);
    let mut entries: Vec<i64> = Vec::with_capacity(n);
    while entries.len() < n {
        let x = rng.gen_range(lo..=hi);
        if !entries.contains(&x) {
            entries.push(x);
        }
    }
    Weight::new(entries.into_iter().map(qi).collect())
}
