//! Central characters of `gl_n` as truncated power-sum sequences.
//!
//! The generator of order `k` acts on the Verma module attached to a weight
//! `lambda` by the power sum `sum_i lambda_i^k`, so a character is stored as
//! the sequence of those values up to a truncation order. Differences of two
//! characters, and the closed form of the difference along the shift
//! `lambda = mu + e_1 + ... + e_r - e_{n-s+1} - ... - e_n`, come out in
//! shift-polynomial form and carry an explicit node witness.

use crate::expsum::Witness;
use crate::scalar::Scalar;
use crate::series::{pbar_eval, pk_eval, MomentKind, MomentSequence};
use std::fmt;

/// Weight of `gl_n`: the `n` diagonal coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight<S> {
    entries: Vec<S>,
}

impl<S: Scalar> Weight<S> {
    pub fn new(entries: Vec<S>) -> Self {
        assert!(!entries.is_empty(), "weight needs rank >= 1");
        Weight { entries }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &S {
        &self.entries[i]
    }

    /// No repeated coordinates, i.e. trivial stabilizer under coordinate
    /// permutations.
    pub fn is_generic(&self) -> bool {
        for i in 0..self.entries.len() {
            for j in i + 1..self.entries.len() {
                if self.entries[i] == self.entries[j] {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralCharacter<S> {
    moments: MomentSequence<S>,
    origin: Option<Weight<S>>,
    rank_tag: Option<usize>,
    t_tag: Option<S>,
}

impl<S: Scalar> CentralCharacter<S> {
    pub fn from_moments(entries: Vec<S>) -> Self {
        CentralCharacter {
            moments: MomentSequence::new(MomentKind::Character, entries),
            origin: None,
            rank_tag: None,
            t_tag: None,
        }
    }

    pub fn with_rank_tag(mut self, n: usize) -> Self {
        self.rank_tag = Some(n);
        self
    }

    pub fn with_t_tag(mut self, t: S) -> Self {
        self.t_tag = Some(t);
        self
    }

    pub fn moments(&self) -> &MomentSequence<S> {
        &self.moments
    }

    pub fn order(&self) -> usize {
        self.moments.order()
    }

    /// `chi_k` for `1 <= k <= K`.
    pub fn moment(&self, k: usize) -> &S {
        self.moments.entry(k)
    }

    pub fn origin(&self) -> Option<&Weight<S>> {
        self.origin.as_ref()
    }

    pub fn rank_tag(&self) -> Option<usize> {
        self.rank_tag
    }

    pub fn t_tag(&self) -> Option<&S> {
        self.t_tag.as_ref()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharError {
    OrderMismatch { left: usize, right: usize },
    RankTooSmall { rank: usize, r: usize, s: usize },
}

impl fmt::Display for CharError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharError::OrderMismatch { left, right } => {
                write!(f, "characters truncated at different orders ({left} vs {right})")
            }
            CharError::RankTooSmall { rank, r, s } => {
                write!(f, "rank {rank} cannot host r={r} raised and s={s} lowered coordinates")
            }
        }
    }
}

impl std::error::Error for CharError {}

/// Character of the Verma module attached to `lambda`:
/// `chi_k = sum_i lambda_i^k` for `1 <= k <= order`.
pub fn character_from_weight<S: Scalar>(lambda: &Weight<S>, order: usize) -> CentralCharacter<S> {
    assert!(order >= 1);
    let entries = (1..=order as u32)
        .map(|k| {
            let mut acc = S::zero();
            for x in lambda.entries() {
                acc = acc.add_ref(&x.pow_u(k));
            }
            acc
        })
        .collect();
    CentralCharacter {
        moments: MomentSequence::new(MomentKind::Character, entries),
        origin: Some(lambda.clone()),
        rank_tag: Some(lambda.rank()),
        t_tag: None,
    }
}

/// Coefficientwise difference `chi_k - psi_k`; both characters must be
/// truncated at the same order.
pub fn character_difference<S: Scalar>(
    chi: &CentralCharacter<S>,
    psi: &CentralCharacter<S>,
) -> Result<MomentSequence<S>, CharError> {
    if chi.order() != psi.order() {
        return Err(CharError::OrderMismatch {
            left: chi.order(),
            right: psi.order(),
        });
    }
    let entries = chi
        .moments
        .entries()
        .iter()
        .zip(psi.moments.entries())
        .map(|(a, b)| a.sub_ref(b))
        .collect();
    Ok(MomentSequence::new(MomentKind::Difference, entries))
}

/// Closed-form difference along
/// `lambda = mu + e_1 + ... + e_r - e_{n-s+1} - ... - e_n`:
/// `d_k = sum_{i<=r} P_k(mu_i) + sum_{j>n-s} Pbar_k(mu_j)`, together with the
/// witness in plain-node normalization (`B = {mu_1..mu_r}`,
/// `C = {mu_{n-s+1}-1, ..., mu_n-1}`, common nodes cancelled).
pub fn lemma9_difference<S: Scalar>(
    mu: &Weight<S>,
    r: usize,
    s: usize,
    order: usize,
) -> Result<(MomentSequence<S>, Witness<S>), CharError> {
    assert!(order >= 1);
    let n = mu.rank();
    if r + s > n {
        return Err(CharError::RankTooSmall { rank: n, r, s });
    }
    let entries = (1..=order as u32)
        .map(|k| {
            let mut acc = S::zero();
            for i in 0..r {
                acc = acc.add_ref(&pk_eval(k, mu.entry(i)));
            }
            for j in n - s..n {
                acc = acc.add_ref(&pbar_eval(k, mu.entry(j)));
            }
            acc
        })
        .collect();
    let b_nodes: Vec<S> = mu.entries()[..r].to_vec();
    let c_nodes: Vec<S> = mu.entries()[n - s..].iter().map(|x| x.sub_ref(&S::one())).collect();
    let witness = Witness::reduced(b_nodes, c_nodes);
    Ok((MomentSequence::new(MomentKind::Difference, entries), witness))
}
