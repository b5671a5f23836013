//! PBW normal forms in `U(gl_n)`.
//!
//! Generators `E_{ij}` satisfy `[E_{ij}, E_{kl}] = d_{jk} E_{il} - d_{li} E_{kj}`.
//! The normal product order puts lowering generators first, then raising,
//! then Cartan generators, each class ordered lexicographically by index.
//! With Cartan factors rightmost and raising factors in the middle, a
//! normal monomial applied to a highest-weight vector evaluates in one pass:
//! the Cartan block contributes its eigenvalue, any raising factor kills the
//! vector, and the lowering block indexes a basis monomial.
//!
//! Straightening rewrites an arbitrary word by swapping the first
//! out-of-order adjacent pair and adding the commutator word; a memo table
//! keyed by words keeps the repeated subproblems cheap.

use super::EnvelopingError;
use crate::scalar::{qi, qr, Q};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// Matrix-unit generator `E_{row,col}`, indices 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub row: u8,
    pub col: u8,
}

impl Gen {
    pub fn new(row: usize, col: usize, n: usize) -> Result<Self, EnvelopingError> {
        if row == 0 || col == 0 || row > n || col > n || n > u8::MAX as usize {
            return Err(EnvelopingError::InvalidGenerator { row, col, rank: n });
        }
        Ok(Gen {
            row: row as u8,
            col: col as u8,
        })
    }

    pub fn is_lowering(&self) -> bool {
        self.row > self.col
    }

    pub fn is_raising(&self) -> bool {
        self.row < self.col
    }

    pub fn is_cartan(&self) -> bool {
        self.row == self.col
    }

    /// Position in the normal product order.
    fn order_key(&self) -> (u8, u8, u8) {
        let class = if self.is_lowering() {
            0
        } else if self.is_raising() {
            1
        } else {
            2
        };
        (class, self.row, self.col)
    }

    /// Weight added to a vector this generator acts on: `e_row - e_col`.
    pub fn weight(&self, n: usize) -> Vec<i64> {
        let mut w = vec![0i64; n];
        w[self.row as usize - 1] += 1;
        w[self.col as usize - 1] -= 1;
        w
    }

    /// Height of the weight drop of a lowering generator.
    pub fn ht(&self) -> usize {
        debug_assert!(self.is_lowering());
        (self.row - self.col) as usize
    }
}

/// Normal monomial: `(generator, exponent)` pairs in normal product order.
pub type Monomial = Vec<(Gen, u32)>;

/// Flattens a monomial into its letter word.
pub fn monomial_letters(mono: &Monomial) -> Vec<Gen> {
    let mut out = Vec::new();
    for (g, e) in mono {
        for _ in 0..*e {
            out.push(*g);
        }
    }
    out
}

fn word_to_monomial(word: &[Gen]) -> Monomial {
    let mut out: Monomial = Vec::new();
    for &g in word {
        match out.last_mut() {
            Some((last, e)) if *last == g => *e += 1,
            _ => out.push((g, 1)),
        }
    }
    out
}

/// Element of `U(gl_n)` in PBW normal form; no zero coefficients stored.
#[derive(Debug, Clone, PartialEq)]
pub struct UEAElement {
    n: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl UEAElement {
    pub fn zero(n: usize) -> Self {
        UEAElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        let mut e = UEAElement::zero(n);
        e.add_term(Vec::new(), c);
        e
    }

    pub fn generator(n: usize, g: Gen) -> Self {
        let mut e = UEAElement::zero(n);
        e.add_term(vec![(g, 1)], Q::one());
        e
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &UEAElement) -> UEAElement {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &UEAElement) -> UEAElement {
        self.add(&rhs.scale(&qi(-1)))
    }

    pub fn scale(&self, c: &Q) -> UEAElement {
        if c.is_zero() {
            return UEAElement::zero(self.n);
        }
        UEAElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Product, restraightened.
    pub fn mul(&self, rhs: &UEAElement, st: &mut Straightener) -> UEAElement {
        assert_eq!(self.n, rhs.n);
        let mut out = UEAElement::zero(self.n);
        for (ma, ca) in &self.terms {
            let word = monomial_letters(ma);
            for (mb, cb) in &rhs.terms {
                let mut w = word.clone();
                w.extend(monomial_letters(mb));
                for (m, c) in st.straighten_word(&w) {
                    out.add_term(m, c * ca * cb);
                }
            }
        }
        out
    }

    /// Common weight shift of all monomials, when they agree.
    pub fn weight_shift(&self) -> Option<Vec<i64>> {
        let mut shift: Option<Vec<i64>> = None;
        for mono in self.terms.keys() {
            let mut w = vec![0i64; self.n];
            for (g, e) in mono {
                w[g.row as usize - 1] += *e as i64;
                w[g.col as usize - 1] -= *e as i64;
            }
            match &shift {
                None => shift = Some(w),
                Some(prev) if *prev == w => {}
                Some(_) => return None,
            }
        }
        Some(shift.unwrap_or_else(|| vec![0; self.n]))
    }

    pub fn is_weight_preserving(&self) -> bool {
        self.weight_shift().map_or(false, |w| w.iter().all(|&x| x == 0))
    }
}

/// Straightening engine with a per-instance memo table (thread-confined).
pub struct Straightener {
    n: usize,
    memo: HashMap<Vec<Gen>, BTreeMap<Monomial, Q>>,
}

impl Straightener {
    pub fn new(n: usize) -> Self {
        Straightener {
            n,
            memo: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Normal form of a product of generators, as `monomial -> coefficient`.
    pub fn straighten_word(&mut self, word: &[Gen]) -> BTreeMap<Monomial, Q> {
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }
        let result = self.straighten_uncached(word, false);
        self.memo.insert(word.to_vec(), result.clone());
        result
    }

    fn straighten_uncached(&mut self, word: &[Gen], rightmost: bool) -> BTreeMap<Monomial, Q> {
        let inversion = if rightmost {
            (0..word.len().saturating_sub(1))
                .rev()
                .find(|&k| word[k].order_key() > word[k + 1].order_key())
        } else {
            (0..word.len().saturating_sub(1)).find(|&k| word[k].order_key() > word[k + 1].order_key())
        };
        let Some(k) = inversion else {
            let mut out = BTreeMap::new();
            out.insert(word_to_monomial(word), Q::one());
            return out;
        };
        let a = word[k];
        let b = word[k + 1];
        let mut out = BTreeMap::new();
        let mut merge = |terms: BTreeMap<Monomial, Q>, sign: Q| {
            for (m, c) in terms {
                let entry = out.entry(m).or_insert_with(Q::zero);
                *entry += c * &sign;
            }
        };
        // Swapped word.
        let mut swapped = word.to_vec();
        swapped.swap(k, k + 1);
        let sw = if rightmost {
            self.straighten_uncached(&swapped, true)
        } else {
            self.straighten_word(&swapped)
        };
        merge(sw, Q::one());
        // Commutator words: [E_ab, E_cd] = d_bc E_ad - d_da E_cb.
        let bracket = |g: Gen, sign: i64, me: &mut Self, out_merge: &mut dyn FnMut(BTreeMap<Monomial, Q>, Q)| {
            let mut w = Vec::with_capacity(word.len() - 1);
            w.extend_from_slice(&word[..k]);
            w.push(g);
            w.extend_from_slice(&word[k + 2..]);
            let terms = if rightmost {
                me.straighten_uncached(&w, true)
            } else {
                me.straighten_word(&w)
            };
            out_merge(terms, qi(sign));
        };
        if a.col == b.row {
            bracket(
                Gen {
                    row: a.row,
                    col: b.col,
                },
                1,
                self,
                &mut merge,
            );
        }
        if b.col == a.row {
            bracket(
                Gen {
                    row: b.row,
                    col: a.col,
                },
                -1,
                self,
                &mut merge,
            );
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Reduction with the opposite inversion choice; used to check that the
    /// normal form does not depend on the rewrite order.
    #[cfg(test)]
    pub fn straighten_word_rightmost(&mut self, word: &[Gen]) -> BTreeMap<Monomial, Q> {
        self.straighten_uncached(word, true)
    }
}

/// Normal form of a formal product of generators given as `(row, col)`
/// index pairs.
pub fn straighten(word: &[(usize, usize)], n: usize) -> Result<UEAElement, EnvelopingError> {
    let gens: Vec<Gen> = word
        .iter()
        .map(|&(i, j)| Gen::new(i, j, n))
        .collect::<Result<_, _>>()?;
    let mut st = Straightener::new(n);
    let mut out = UEAElement::zero(n);
    for (m, c) in st.straighten_word(&gens) {
        out.add_term(m, c);
    }
    Ok(out)
}

/// Half sum of positive roots: `rho_i = (n + 1 - 2 i) / 2`.
pub fn rho(n: usize) -> Vec<Q> {
    (1..=n).map(|i| qr(n as i64 + 1 - 2 * i as i64, 2)).collect()
}

/// The quadratic central element, normalized so that it acts on the Verma
/// module of a weight `lambda` by `sum_i lambda_i^2`:
/// `C_2 = sum_{ij} E_{ij} E_{ji} + <rho, rho>`. The normalization constant
/// is a derived closed form; the Verma-action tests gate it.
pub fn casimir2(n: usize) -> UEAElement {
    let mut st = Straightener::new(n);
    let mut out = UEAElement::zero(n);
    for i in 1..=n {
        for j in 1..=n {
            let word = [
                Gen {
                    row: i as u8,
                    col: j as u8,
                },
                Gen {
                    row: j as u8,
                    col: i as u8,
                },
            ];
            for (m, c) in st.straighten_word(&word) {
                out.add_term(m, c);
            }
        }
    }
    let rho_sq = rho(n).iter().map(|x| x * x).fold(Q::zero(), |a, b| a + b);
    out.add_term(Vec::new(), rho_sq);
    out
}
