//! Truncated Verma modules with exact weight-graded action matrices.
//!
//! The module attached to `lambda` has highest weight `lambda - rho`. The
//! truncation keeps every lowering monomial whose weight drop has height at
//! most `depth`; the height of a drop is the same for all monomials sharing
//! it, so each retained block is a complete weight space of the full module
//! and weight-preserving elements act on it invariantly. Elements that move
//! weight get a single flagged matrix on the whole truncation instead, with
//! components that fall off the truncation dropped.

use super::element::{casimir2, monomial_letters, rho, Gen, Monomial, Straightener, UEAElement};
use crate::charcenter::Weight;
use crate::linalg::QMatrix;
use crate::scalar::{Scalar, Q};
use num_traits::Zero;
use std::collections::BTreeMap;

pub struct VermaTruncation {
    n: usize,
    depth: usize,
    /// Highest weight `lambda - rho`.
    hw: Vec<Q>,
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    drops: Vec<Vec<i64>>,
    blocks: BTreeMap<Vec<i64>, Vec<usize>>,
    straightener: Straightener,
}

/// Weight drop of a lowering monomial, as a nonnegative root combination
/// (`drop = sum exp * (e_col - e_row)` entrywise).
fn monomial_drop(mono: &Monomial, n: usize) -> Vec<i64> {
    let mut drop = vec![0i64; n];
    for (g, e) in mono {
        drop[g.col as usize - 1] += *e as i64;
        drop[g.row as usize - 1] -= *e as i64;
    }
    drop
}

/// Height of a valid drop: the sum of its prefix sums.
pub fn drop_height(drop: &[i64]) -> usize {
    let mut ht = 0i64;
    let mut prefix = 0i64;
    for d in &drop[..drop.len() - 1] {
        prefix += d;
        ht += prefix;
    }
    ht as usize
}

/// Whether a vector lies in the nonnegative root cone (all prefix sums
/// nonnegative, total zero), i.e. is the drop of some lowering monomial.
pub fn is_valid_drop(v: &[i64]) -> bool {
    let mut prefix = 0i64;
    for d in &v[..v.len() - 1] {
        prefix += d;
        if prefix < 0 {
            return false;
        }
    }
    prefix + v[v.len() - 1] == 0
}

impl VermaTruncation {
    pub fn new(lambda: &Weight<Q>, depth: usize) -> Self {
        let n = lambda.rank();
        let hw: Vec<Q> = lambda
            .entries()
            .iter()
            .zip(rho(n))
            .map(|(l, r)| l - r)
            .collect();
        // Lowering generators in normal order.
        let mut gens: Vec<Gen> = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i > j {
                    gens.push(Gen {
                        row: i as u8,
                        col: j as u8,
                    });
                }
            }
        }
        gens.sort_by_key(|g| (g.row, g.col));
        let mut monomials = Vec::new();
        enumerate_monomials(&gens, 0, depth, &mut Vec::new(), &mut monomials);
        monomials.sort();
        let index: BTreeMap<Monomial, usize> = monomials.iter().cloned().zip(0..).collect();
        let drops: Vec<Vec<i64>> = monomials.iter().map(|m| monomial_drop(m, n)).collect();
        let mut blocks: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (i, d) in drops.iter().enumerate() {
            blocks.entry(d.clone()).or_default().push(i);
        }
        VermaTruncation {
            n,
            depth,
            hw,
            monomials,
            index,
            drops,
            blocks,
            straightener: Straightener::new(n),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn highest_weight(&self) -> &[Q] {
        &self.hw
    }

    pub fn monomial(&self, idx: usize) -> &Monomial {
        &self.monomials[idx]
    }

    pub fn drop_of(&self, idx: usize) -> &[i64] {
        &self.drops[idx]
    }

    pub fn index_of(&self, mono: &Monomial) -> Option<usize> {
        self.index.get(mono).copied()
    }

    pub fn blocks(&self) -> &BTreeMap<Vec<i64>, Vec<usize>> {
        &self.blocks
    }

    /// Index of the highest-weight vector (the empty monomial).
    pub fn highest_weight_index(&self) -> usize {
        self.index[&Vec::new()]
    }

    /// Applies a normal-form element to a basis vector. Returns the image
    /// components inside the truncation and whether anything fell off.
    pub fn apply_element(&mut self, x: &UEAElement, idx: usize) -> (Vec<(usize, Q)>, bool) {
        assert_eq!(x.rank(), self.n);
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        let mut escaped = false;
        let base = monomial_letters(&self.monomials[idx]);
        for (mono_x, coef) in x.terms() {
            let mut word = monomial_letters(mono_x);
            word.extend_from_slice(&base);
            for (nm, c) in self.straightener.straighten_word(&word) {
                // Normal order puts lowering factors first, raising in the
                // middle, Cartan last; Cartan evaluates on the highest-weight
                // vector, raising kills it.
                if nm.iter().any(|(g, _)| g.is_raising()) {
                    continue;
                }
                let mut value = c * coef;
                let mut lower: Monomial = Vec::new();
                for (g, e) in &nm {
                    if g.is_cartan() {
                        value = value * self.hw[g.row as usize - 1].pow_u(*e);
                    } else {
                        lower.push((*g, *e));
                    }
                }
                if value.is_zero() {
                    continue;
                }
                match self.index.get(&lower) {
                    Some(&target) => {
                        let entry = acc.entry(target).or_insert_with(Q::zero);
                        *entry += value;
                    }
                    None => escaped = true,
                }
            }
        }
        (acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(), escaped)
    }
}

fn enumerate_monomials(gens: &[Gen], pos: usize, budget: usize, current: &mut Monomial, out: &mut Vec<Monomial>) {
    if pos == gens.len() {
        out.push(current.clone());
        return;
    }
    let g = gens[pos];
    let step = g.ht();
    let mut used = 0usize;
    let mut exp = 0u32;
    loop {
        if exp > 0 {
            current.push((g, exp));
        }
        enumerate_monomials(gens, pos + 1, budget - used, current, out);
        if exp > 0 {
            current.pop();
        }
        used += step;
        exp += 1;
        if used > budget {
            break;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VermaBlockMatrix {
    pub drop: Vec<i64>,
    pub indices: Vec<usize>,
    pub matrix: QMatrix,
}

/// Action of an element on the truncation: per-weight-block matrices for
/// weight-preserving elements, one flagged full matrix otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum VermaOperator {
    Blocks(Vec<VermaBlockMatrix>),
    Full { matrix: QMatrix, escaped: bool },
}

impl VermaOperator {
    /// Whether the operator is the scalar `c` on the whole truncation.
    pub fn is_scalar(&self, c: &Q) -> bool {
        match self {
            VermaOperator::Blocks(blocks) => blocks.iter().all(|b| {
                let dim = b.indices.len();
                b.matrix == QMatrix::identity(dim).scale(c)
            }),
            VermaOperator::Full { matrix, escaped } => {
                !escaped && *matrix == QMatrix::identity(matrix.rows()).scale(c)
            }
        }
    }
}

/// Matrix of `x` on the depth-truncated Verma module of `lambda`.
pub fn verma_action(lambda: &Weight<Q>, depth: usize, x: &UEAElement) -> VermaOperator {
    let mut space = VermaTruncation::new(lambda, depth);
    if x.is_weight_preserving() {
        let blocks: Vec<(Vec<i64>, Vec<usize>)> = space
            .blocks()
            .iter()
            .map(|(d, idxs)| (d.clone(), idxs.clone()))
            .collect();
        let mut out = Vec::with_capacity(blocks.len());
        for (drop, indices) in blocks {
            let dim = indices.len();
            let pos: BTreeMap<usize, usize> = indices.iter().copied().zip(0..).collect();
            let mut matrix = QMatrix::zeros(dim, dim);
            for (src_pos, &src) in indices.iter().enumerate() {
                let (image, escaped) = space.apply_element(x, src);
                assert!(!escaped, "weight-preserving action stays inside its block");
                for (target, c) in image {
                    let tgt_pos = pos[&target];
                    matrix[(tgt_pos, src_pos)] += c;
                }
            }
            out.push(VermaBlockMatrix {
                drop,
                indices,
                matrix,
            });
        }
        VermaOperator::Blocks(out)
    } else {
        let dim = space.dim();
        let mut matrix = QMatrix::zeros(dim, dim);
        let mut any_escape = false;
        for src in 0..dim {
            let (image, escaped) = space.apply_element(x, src);
            any_escape |= escaped;
            for (target, c) in image {
                matrix[(target, src)] += c;
            }
        }
        VermaOperator::Full {
            matrix,
            escaped: any_escape,
        }
    }
}

/// Oracle check that the explicit quadratic Casimir is central and acts on
/// the truncation by the power sum of the weight coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CasimirReport {
    pub n: usize,
    pub lambda: Vec<Q>,
    pub depth: usize,
    pub expected: Q,
    pub dim: usize,
    pub scalar_ok: bool,
    pub central_ok: bool,
}

impl CasimirReport {
    pub fn pass(&self) -> bool {
        self.scalar_ok && self.central_ok
    }
}

pub fn casimir_scalar_check(lambda: &Weight<Q>, depth: usize) -> CasimirReport {
    let n = lambda.rank();
    let c2 = casimir2(n);
    let expected = lambda
        .entries()
        .iter()
        .map(|x| x * x)
        .fold(Q::zero(), |a, b| a + b);
    let op = verma_action(lambda, depth, &c2);
    let scalar_ok = op.is_scalar(&expected);
    let mut central_ok = true;
    let mut st = Straightener::new(n);
    'outer: for i in 1..=n {
        for j in 1..=n {
            let e = UEAElement::generator(n, Gen::new(i, j, n).unwrap());
            if !c2.mul(&e, &mut st).sub(&e.mul(&c2, &mut st)).is_zero() {
                central_ok = false;
                break 'outer;
            }
        }
    }
    CasimirReport {
        n,
        lambda: lambda.entries().to_vec(),
        depth,
        expected,
        dim: VermaTruncation::new(lambda, depth).dim(),
        scalar_ok,
        central_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enveloping::straighten;
    use crate::scalar::{qi, qr};

    fn w(entries: &[i64]) -> Weight<Q> {
        Weight::new(entries.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn truncation_counts_for_gl3() {
        // Exponent vectors (a21, a31, a32) with a21 + 2 a31 + a32 <= 3.
        let t = VermaTruncation::new(&w(&[4, 1, 0]), 3);
        assert_eq!(t.dim(), 13);
        // Depth zero keeps only the highest-weight vector.
        let t0 = VermaTruncation::new(&w(&[4, 1, 0]), 0);
        assert_eq!(t0.dim(), 1);
    }

    #[test]
    fn cartan_eigenvalue_on_highest_weight_vector() {
        // gl_2, lambda = (3,1): hw = lambda - rho = (5/2, 3/2).
        let x = straighten(&[(1, 1)], 2).unwrap();
        let op = verma_action(&w(&[3, 1]), 2, &x);
        let VermaOperator::Blocks(blocks) = op else { panic!() };
        let top = blocks.iter().find(|b| b.drop.iter().all(|&d| d == 0)).unwrap();
        assert_eq!(top.matrix[(0, 0)], qr(5, 2));
    }

    #[test]
    fn raising_applied_to_lowered_vector() {
        // E_12 (E_21 v) = (mu_1 - mu_2) v = 1 v on M_(3,1).
        let mut t = VermaTruncation::new(&w(&[3, 1]), 2);
        let e21 = vec![(Gen::new(2, 1, 2).unwrap(), 1)];
        let src = t.index_of(&e21).unwrap();
        let x = straighten(&[(1, 2)], 2).unwrap();
        let (image, escaped) = t.apply_element(&x, src);
        assert!(!escaped);
        let hw_idx = t.highest_weight_index();
        assert_eq!(image, vec![(hw_idx, qi(1))]);
    }

    #[test]
    fn casimir_acts_by_power_sum() {
        let report = casimir_scalar_check(&w(&[3, 1]), 3);
        assert_eq!(report.expected, qi(10));
        assert!(report.pass(), "{report:?}");
        for depth in 0..=3 {
            let op = verma_action(&w(&[3, 1]), depth, &casimir2(2));
            assert!(op.is_scalar(&qi(10)), "depth {depth}");
        }
    }

    #[test]
    fn casimir_scalar_on_gl3_with_rational_weight() {
        let lambda = Weight::new(vec![qr(7, 2), qi(1), qr(-1, 3)]);
        let expected = qr(49, 4) + qi(1) + qr(1, 9);
        let report = casimir_scalar_check(&lambda, 2);
        assert_eq!(report.expected, expected);
        assert!(report.pass());
    }

    #[test]
    fn lowering_element_is_flagged_full() {
        let x = straighten(&[(2, 1)], 2).unwrap();
        let op = verma_action(&w(&[3, 1]), 2, &x);
        let VermaOperator::Full { matrix, escaped } = op else {
            panic!("lowering moves weight")
        };
        assert!(escaped, "depth boundary must be flagged");
        // v maps to E_21 v with coefficient 1.
        let t = VermaTruncation::new(&w(&[3, 1]), 2);
        let hw_idx = t.highest_weight_index();
        let tgt = t.index_of(&vec![(Gen::new(2, 1, 2).unwrap(), 1)]).unwrap();
        assert_eq!(matrix[(tgt, hw_idx)], qi(1));
    }

    #[test]
    fn drop_helpers() {
        assert!(is_valid_drop(&[1, 0, -1]));
        assert!(!is_valid_drop(&[-1, 1, 0]));
        assert!(!is_valid_drop(&[1, 0, 0]));
        assert_eq!(drop_height(&[1, 0, -1]), 2);
        assert_eq!(drop_height(&[1, -1, 0]), 1);
        assert_eq!(drop_height(&[2, 0, -2]), 4);
    }
}
