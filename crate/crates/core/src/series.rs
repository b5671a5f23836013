//! Shift polynomials and exponential-generating-function algebra.
//!
//! A character difference enters as the truncated moment sequence
//! `d_1, ..., d_K`. Dividing its exponential generating function by
//! `(e^u - 1)` turns shift-polynomial data `P_k(b) = (b+1)^k - b^k` into
//! plain power data: if `d_k = sum_B P_k(b) - sum_C P_k(c)` then the
//! quotient series `g(u) = sum t_j u^j / j!` has `t_j = sum_B b^j - sum_C c^j`.
//! The division is the triangular recurrence
//! `t_{k-1} = (d_k - sum_{j<k-1} C(k,j) t_j) / k`, the unique solution of
//! `d_k = sum_{j=0}^{k-1} C(k,j) t_j`; for difference sequences the implicit
//! index-0 moment is zero, so nothing else is consistent with the formal
//! factor.

use crate::scalar::{binom, Scalar};

/// Whether a truncated moment sequence is a character (implicit index-0
/// entry 1) or a difference of two characters (implicit index-0 entry 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    Character,
    Difference,
}

/// Truncated moment sequence `d_1..d_K`; index 0 is implicit and fixed by
/// the kind.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence<S> {
    kind: MomentKind,
    entries: Vec<S>,
}

impl<S: Scalar> MomentSequence<S> {
    pub fn new(kind: MomentKind, entries: Vec<S>) -> Self {
        assert!(!entries.is_empty(), "moment sequence needs order >= 1");
        MomentSequence { kind, entries }
    }

    pub fn kind(&self) -> MomentKind {
        self.kind
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.entries.len()
    }

    /// `d_k` for `1 <= k <= K`.
    pub fn entry(&self, k: usize) -> &S {
        assert!(k >= 1 && k <= self.entries.len());
        &self.entries[k - 1]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn implicit_d0(&self) -> S {
        match self.kind {
            MomentKind::Character => S::one(),
            MomentKind::Difference => S::zero(),
        }
    }

    /// Entrywise sum; both operands must share kind and order.
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.kind, rhs.kind);
        assert_eq!(self.order(), rhs.order());
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add_ref(b))
            .collect();
        MomentSequence { kind: self.kind, entries }
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order >= 1 && order <= self.order());
        MomentSequence {
            kind: self.kind,
            entries: self.entries[..order].to_vec(),
        }
    }
}

/// Coefficients `t_0..t_{K-1}` of `g(u) = sum t_j u^j / j!`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeq<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> TaylorSeq<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        TaylorSeq { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, j: usize) -> &S {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }
}

/// `P_k(b) = (b+1)^k - b^k`.
pub fn pk_eval<S: Scalar>(k: u32, b: &S) -> S {
    let b1 = b.add_ref(&S::one());
    b1.pow_u(k).sub_ref(&b.pow_u(k))
}

/// `Pbar_k(c) = (c-1)^k - c^k`; equal to `-P_k(c-1)`.
pub fn pbar_eval<S: Scalar>(k: u32, c: &S) -> S {
    let c1 = c.sub_ref(&S::one());
    c1.pow_u(k).sub_ref(&c.pow_u(k))
}

/// Moment difference of a node witness:
/// `d_k = sum_{b in B} P_k(b) - sum_{c in C} P_k(c)` for `1 <= k <= order`.
pub fn moments_from_witness<S: Scalar>(b_nodes: &[S], c_nodes: &[S], order: usize) -> MomentSequence<S> {
    assert!(order >= 1);
    let entries = (1..=order as u32)
        .map(|k| {
            let mut acc = S::zero();
            for b in b_nodes {
                acc = acc.add_ref(&pk_eval(k, b));
            }
            for c in c_nodes {
                acc = acc.sub_ref(&pk_eval(k, c));
            }
            acc
        })
        .collect();
    MomentSequence::new(MomentKind::Difference, entries)
}

/// Inverts the formal factor `1/(e^u - 1)`: returns `t_0..t_{K-1}` with
/// `d_k = sum_{j=0}^{k-1} C(k,j) t_j`. Requires a difference sequence
/// (implicit `d_0 = 0`); the recurrence always solves.
pub fn divide_by_expm1<S: Scalar>(d: &MomentSequence<S>) -> TaylorSeq<S> {
    assert_eq!(d.kind(), MomentKind::Difference, "divide_by_expm1 expects a difference sequence");
    let order = d.order();
    let mut t: Vec<S> = Vec::with_capacity(order);
    for k in 1..=order as u32 {
        let mut rhs = d.entry(k as usize).clone();
        for (j, tj) in t.iter().enumerate().take(k as usize - 1) {
            rhs = rhs.sub_ref(&binom::<S>(k, j as u32).mul_ref(tj));
        }
        t.push(rhs.div_ref(&S::from_int(k as i64)));
    }
    TaylorSeq::new(t)
}
