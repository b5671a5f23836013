//! Recognition of signed integer exponential sums from truncated data.
//!
//! After EGF division the input is a sequence `t_0..t_{K-1}` that should
//! look like `t_j = sum_x n_x x^j` with nonzero integer weights `n_x`. The
//! procedure finds the minimal linear recurrence annihilating the whole
//! sequence (Berlekamp–Massey over exact rationals), rejects repeated
//! recurrence roots (a repeated root would force a polynomial coefficient,
//! which no plain exponential sum has), factors the recurrence polynomial
//! into irreducibles, and reads one integer weight off each irreducible
//! factor: the weight function `x -> H(x)/q'(x)` is constant on conjugate
//! roots whenever it is rational, so a single exact polynomial congruence
//! per factor decides integrality without any algebraic-number arithmetic.
//! `H` is the numerator of the ordinary generating function
//! `sum t_j z^{-j-1} = H(z)/q(z)`, recoverable from the data as
//! `h_m = sum_{a=m+1}^{rho} q_a t_{a-1-m}`.
//!
//! A returned witness certifies the match at every supplied order; the
//! verified order is part of the result, since the data is a truncation.

use crate::charcenter::{character_difference, CentralCharacter, CharError};
use crate::poly::{factor_monic_squarefree, power_sums_from_monic, Poly};
use crate::scalar::{qi, Scalar, Q};
use crate::scalar::binom;
use crate::series::{divide_by_expm1, MomentKind, MomentSequence, TaylorSeq};
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Minimal annihilating recurrence of a truncated sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PronyKernel {
    /// Minimal recurrence length (number of distinct nodes if pure).
    pub rank: usize,
    /// Monic `q` of degree `rank` with `sum_a q_a t_{m+a} = 0` for all
    /// windows inside the data.
    pub char_poly: Poly,
    /// Whether `gcd(q, q')` is constant.
    pub square_free: bool,
}

/// Outcome of the rank search under a node budget.
#[derive(Debug, Clone, PartialEq)]
pub enum RankOutcome {
    Kernel(PronyKernel),
    /// The minimal recurrence over the full data is longer than the budget.
    RankExceedsBound { complexity: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecoverError {
    /// The data certifies ranks only up to half its length.
    NeedMoreOrders { required: usize },
    RankExceedsBound { complexity: usize },
    /// Repeated recurrence root: the sequence carries a polynomial factor.
    NotPureExponential,
    /// Some node weight is not a (rational) integer.
    NonIntegerWeight,
}

impl fmt::Display for RecoverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecoverError::NeedMoreOrders { required } => {
                write!(f, "need at least {required} sequence entries for this node budget")
            }
            RecoverError::RankExceedsBound { complexity } => {
                write!(f, "minimal recurrence has length {complexity}, beyond the node budget")
            }
            RecoverError::NotPureExponential => write!(f, "repeated recurrence root: not a pure exponential sum"),
            RecoverError::NonIntegerWeight => write!(f, "node weights are not integers"),
        }
    }
}

impl std::error::Error for RecoverError {}

/// Berlekamp–Massey over `Q`: returns `(L, c)` where `c` has length `L + 1`,
/// `c[0] = 1`, and `sum_j c[j] s[i-j] = 0` for every `L <= i < n`. `L` is
/// minimal among all recurrences generating the full sequence.
fn berlekamp_massey(seq: &[Q]) -> (usize, Vec<Q>) {
    let n = seq.len();
    let mut c: Vec<Q> = vec![Q::one()];
    let mut b: Vec<Q> = vec![Q::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut delta_prev = Q::one();
    for i in 0..n {
        let mut delta = Q::zero();
        for (j, cj) in c.iter().enumerate() {
            if j > i {
                break;
            }
            delta += cj * &seq[i - j];
        }
        if delta.is_zero() {
            m += 1;
        } else {
            let coef = &delta / &delta_prev;
            let needed = b.len() + m;
            let update = |c: &mut Vec<Q>| {
                if c.len() < needed {
                    c.resize(needed, Q::zero());
                }
                for (j, bj) in b.iter().enumerate() {
                    c[j + m] -= &coef * bj;
                }
            };
            if 2 * l <= i {
                let t = c.clone();
                update(&mut c);
                l = i + 1 - l;
                b = t;
                delta_prev = delta;
                m = 1;
            } else {
                update(&mut c);
                m += 1;
            }
        }
    }
    c.resize(l + 1, Q::zero());
    (l, c)
}

/// Minimal recurrence of the quotient sequence under a node budget
/// `max_nodes`. Requires `t.len() >= 2 * max_nodes`, the standard amount of
/// data certifying ranks up to the budget.
pub fn hankel_rank_and_recurrence(t: &TaylorSeq<Q>, max_nodes: usize) -> Result<RankOutcome, RecoverError> {
    if t.len() < 2 * max_nodes {
        return Err(RecoverError::NeedMoreOrders { required: 2 * max_nodes });
    }
    let (complexity, conn) = berlekamp_massey(t.coeffs());
    if complexity > max_nodes {
        return Ok(RankOutcome::RankExceedsBound { complexity });
    }
    // Monic annihilator q_a = c_{L-a}.
    let coeffs: Vec<Q> = conn.iter().rev().cloned().collect();
    let q = Poly::from_coeffs(coeffs);
    debug_assert_eq!(q.deg(), Some(complexity));
    assert!(annihilates(&q, t.coeffs()), "recurrence must hold over the full data");
    let square_free = q.deg() == Some(0) || q.is_squarefree();
    Ok(RankOutcome::Kernel(PronyKernel {
        rank: complexity,
        char_poly: q,
        square_free,
    }))
}

fn annihilates(q: &Poly, seq: &[Q]) -> bool {
    let rho = match q.deg() {
        None => return false,
        Some(d) => d,
    };
    if seq.len() <= rho {
        return true;
    }
    for m in 0..=(seq.len() - 1 - rho) {
        let mut acc = Q::zero();
        for a in 0..=rho {
            acc += q.coeff(a) * &seq[m + a];
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// Signed integer exponential sum in exact form: pairwise-distinct monic
/// irreducible node polynomials, each carrying one nonzero integer weight
/// shared by its conjugate roots.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialPolynomial {
    terms: Vec<(Poly, i64)>,
}

impl ExponentialPolynomial {
    pub fn new(mut terms: Vec<(Poly, i64)>) -> Self {
        assert!(terms.iter().all(|(f, w)| f.is_monic() && *w != 0));
        terms.sort_by(|a, b| a.0.cmp_structural(&b.0));
        ExponentialPolynomial { terms }
    }

    pub fn terms(&self) -> &[(Poly, i64)] {
        &self.terms
    }

    /// Total node count `sum deg f` (with distinct conjugates counted once
    /// each, multiplicities not folded in).
    pub fn node_count(&self) -> usize {
        self.terms.iter().map(|(f, _)| f.deg().unwrap_or(0)).sum()
    }

    /// `t_j = sum_x n_x x^j` for `j < count`, via Newton power sums.
    pub fn power_sums(&self, count: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); count];
        for (f, w) in &self.terms {
            let sums = power_sums_from_monic(f, count);
            for (j, s) in sums.iter().enumerate() {
                out[j] += s * qi(*w);
            }
        }
        out
    }

    /// Moment difference `d_k = sum_x n_x P_k(x)` for `1 <= k <= order`.
    pub fn moments(&self, order: usize) -> MomentSequence<Q> {
        let sums = self.power_sums(order);
        let entries = (1..=order)
            .map(|k| {
                let mut acc = Q::zero();
                for j in 0..k {
                    acc += binom::<Q>(k as u32, j as u32) * &sums[j];
                }
                acc
            })
            .collect();
        MomentSequence::new(MomentKind::Difference, entries)
    }
}

/// Node multiset witness: `B` from positive weights, `C` from negative ones.
/// Rational nodes are explicit (with multiplicity); conjugate node packs of
/// degree two or more stay as their minimal polynomial plus signed weight.
/// `B` and `C` share no node.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<S> {
    b: Vec<S>,
    c: Vec<S>,
    algebraic: Vec<AlgebraicPart>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicPart {
    pub min_poly: Poly,
    pub weight: i64,
}

impl<S: Scalar> Witness<S> {
    pub fn empty() -> Self {
        Witness {
            b: Vec::new(),
            c: Vec::new(),
            algebraic: Vec::new(),
        }
    }

    /// Builds a witness with common `B`/`C` nodes cancelled.
    pub fn reduced(b: Vec<S>, c: Vec<S>) -> Self {
        let mut c_left = c;
        let mut b_kept = Vec::with_capacity(b.len());
        for x in b {
            if let Some(pos) = c_left.iter().position(|y| *y == x) {
                c_left.remove(pos);
            } else {
                b_kept.push(x);
            }
        }
        Witness {
            b: b_kept,
            c: c_left,
            algebraic: Vec::new(),
        }
    }

    pub fn with_algebraic(mut self, parts: Vec<AlgebraicPart>) -> Self {
        self.algebraic = parts;
        self
    }

    pub fn b_nodes(&self) -> &[S] {
        &self.b
    }

    pub fn c_nodes(&self) -> &[S] {
        &self.c
    }

    pub fn algebraic(&self) -> &[AlgebraicPart] {
        &self.algebraic
    }

    /// Multiplicity-weighted size of `B`.
    pub fn r(&self) -> usize {
        self.b.len()
            + self
                .algebraic
                .iter()
                .filter(|p| p.weight > 0)
                .map(|p| p.weight as usize * p.min_poly.deg().unwrap_or(0))
                .sum::<usize>()
    }

    /// Multiplicity-weighted size of `C`.
    pub fn s(&self) -> usize {
        self.c.len()
            + self
                .algebraic
                .iter()
                .filter(|p| p.weight < 0)
                .map(|p| (-p.weight) as usize * p.min_poly.deg().unwrap_or(0))
                .sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty() && self.c.is_empty() && self.algebraic.is_empty()
    }

    pub fn has_algebraic_nodes(&self) -> bool {
        !self.algebraic.is_empty()
    }
}

impl Witness<Q> {
    /// Deterministic form: nodes ascending, algebraic parts in structural
    /// polynomial order.
    pub fn normalized(mut self) -> Self {
        self.b.sort();
        self.c.sort();
        self.algebraic.sort_by(|a, b| a.min_poly.cmp_structural(&b.min_poly));
        self
    }
}

/// Recovers the exponential polynomial matching `t` at every supplied index,
/// with at most `max_nodes` distinct nodes.
pub fn recover_exponential_polynomial(t: &TaylorSeq<Q>, max_nodes: usize) -> Result<ExponentialPolynomial, RecoverError> {
    match hankel_rank_and_recurrence(t, max_nodes)? {
        RankOutcome::RankExceedsBound { complexity } => Err(RecoverError::RankExceedsBound { complexity }),
        RankOutcome::Kernel(kernel) => recover_from_kernel(t, &kernel),
    }
}

fn recover_from_kernel(t: &TaylorSeq<Q>, kernel: &PronyKernel) -> Result<ExponentialPolynomial, RecoverError> {
    if kernel.rank == 0 {
        return Ok(ExponentialPolynomial::new(Vec::new()));
    }
    if !kernel.square_free {
        return Err(RecoverError::NotPureExponential);
    }
    let q = &kernel.char_poly;
    let rho = kernel.rank;
    // Numerator of sum_j t_j z^{-j-1} = H(z)/q(z).
    let h = Poly::from_coeffs(
        (0..rho)
            .map(|m| {
                let mut acc = Q::zero();
                for a in m + 1..=rho {
                    acc += q.coeff(a) * t.coeff(a - 1 - m);
                }
                acc
            })
            .collect(),
    );
    let q_der = q.derivative();
    let mut terms = Vec::new();
    for f in factor_monic_squarefree(q) {
        // Weight on the roots of f: H(x)/q'(x), constant across conjugates
        // exactly when rational. gcd(q', f) = 1 because q is square-free.
        let inv = q_der.inverse_mod(&f).expect("square-free annihilator has invertible derivative");
        let w_poly = h.mul(&inv).rem(&f);
        if w_poly.deg().map_or(false, |d| d > 0) {
            return Err(RecoverError::NonIntegerWeight);
        }
        let w = w_poly.coeff(0);
        if !w.denom().is_one() {
            return Err(RecoverError::NonIntegerWeight);
        }
        let w_int = w.numer().to_i64().ok_or(RecoverError::NonIntegerWeight)?;
        assert!(w_int != 0, "zero weight contradicts recurrence minimality");
        terms.push((f, w_int));
    }
    let ep = ExponentialPolynomial::new(terms);
    // The congruences fix the weights; re-derive the whole sequence from the
    // factors' Newton power sums as an end-to-end check.
    let sums = ep.power_sums(t.len());
    assert!(
        sums.iter().zip(t.coeffs()).all(|(a, b)| a == b),
        "recovered exponential sum must reproduce the data"
    );
    Ok(ep)
}

/// Splits an exponential polynomial into the `B`/`C` node multisets.
pub fn witness_from_exponential_polynomial(ep: &ExponentialPolynomial) -> Witness<Q> {
    let mut b = Vec::new();
    let mut c = Vec::new();
    let mut algebraic = Vec::new();
    for (f, w) in ep.terms() {
        if f.deg() == Some(1) {
            let root = -f.coeff(0);
            let bucket = if *w > 0 { &mut b } else { &mut c };
            for _ in 0..w.unsigned_abs() {
                bucket.push(root.clone());
            }
        } else {
            algebraic.push(AlgebraicPart {
                min_poly: f.clone(),
                weight: *w,
            });
        }
    }
    Witness { b, c, algebraic }.normalized()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionStatus {
    NonzeroWitness,
    NoWitnessWithinBound,
    NotExponentialForm,
    Inconclusive,
}

impl DecisionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecisionStatus::NonzeroWitness => "NONZERO_WITNESS",
            DecisionStatus::NoWitnessWithinBound => "NO_WITNESS_WITHIN_BOUND",
            DecisionStatus::NotExponentialForm => "NOT_EXPONENTIAL_FORM",
            DecisionStatus::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Result of the decision pipeline. A `NonzeroWitness` certifies the
/// exponential-sum form at every order up to `verified_order`; the input is
/// a truncation, so the certificate is explicitly order-bounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub status: DecisionStatus,
    pub witness: Option<Witness<Q>>,
    pub exponential: Option<ExponentialPolynomial>,
    pub rank: Option<usize>,
    pub verified_order: usize,
}

/// Decides whether `chi - psi` is a signed integer exponential sum with at
/// most `max_nodes` distinct nodes, to the characters' common order.
pub fn decide_nonvanishing(
    chi: &CentralCharacter<Q>,
    psi: &CentralCharacter<Q>,
    max_nodes: usize,
) -> Result<Decision, CharError> {
    let d = character_difference(chi, psi)?;
    Ok(decide_from_difference(&d, max_nodes))
}

/// Same decision from an already-computed difference sequence.
pub fn decide_from_difference(d: &MomentSequence<Q>, max_nodes: usize) -> Decision {
    assert_eq!(d.kind(), MomentKind::Difference);
    let order = d.order();
    if order < 2 * max_nodes + 1 {
        return Decision {
            status: DecisionStatus::Inconclusive,
            witness: None,
            exponential: None,
            rank: None,
            verified_order: order,
        };
    }
    let t = divide_by_expm1(d);
    let kernel = match hankel_rank_and_recurrence(&t, max_nodes) {
        Err(RecoverError::NeedMoreOrders { .. }) => unreachable!("order >= 2 * max_nodes + 1"),
        Err(_) => unreachable!("rank search only fails on short data"),
        Ok(RankOutcome::RankExceedsBound { complexity }) => {
            return Decision {
                status: DecisionStatus::NoWitnessWithinBound,
                witness: None,
                exponential: None,
                rank: Some(complexity),
                verified_order: order,
            }
        }
        Ok(RankOutcome::Kernel(kernel)) => kernel,
    };
    let rank = kernel.rank;
    match recover_from_kernel(&t, &kernel) {
        Ok(ep) => {
            let witness = witness_from_exponential_polynomial(&ep);
            debug_assert_eq!(&ep.moments(order), d);
            Decision {
                status: DecisionStatus::NonzeroWitness,
                witness: Some(witness),
                exponential: Some(ep),
                rank: Some(rank),
                verified_order: order,
            }
        }
        Err(RecoverError::NotPureExponential) | Err(RecoverError::NonIntegerWeight) => Decision {
            status: DecisionStatus::NotExponentialForm,
            witness: None,
            exponential: None,
            rank: Some(rank),
            verified_order: order,
        },
        Err(RecoverError::RankExceedsBound { complexity }) => Decision {
            status: DecisionStatus::NoWitnessWithinBound,
            witness: None,
            exponential: None,
            rank: Some(complexity),
            verified_order: order,
        },
        Err(RecoverError::NeedMoreOrders { .. }) => unreachable!(),
    }
}
