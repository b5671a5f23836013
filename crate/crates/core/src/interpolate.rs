//! The constructive direction: power-sum completion and finite-rank weight
//! families.
//!
//! Given a node witness and a target character `psi`, each rank `n` beyond
//! the witness size gets a weight `mu` whose first coordinates are the
//! positive nodes, whose last coordinates are the shifted negative nodes,
//! and whose middle block solves the equations
//! `sum_i a_i^k = psi_k - (fixed power sums)` for `k = 1..n-r-s`. The first
//! `m` power sums determine one monic degree-`m` polynomial through Newton's
//! identities; its root multiset is the completion. When that polynomial
//! does not split over the rationals the entries stay symbolic: every
//! verification still runs exactly, because power sums of the completion
//! come from the polynomial's coefficients rather than from its roots.

use crate::approx::{monic_from_power_sums_c, poly_roots};
use crate::charcenter::{CentralCharacter, Weight};
use crate::expsum::Witness;
use crate::poly::{factor, monic_from_power_sums, power_sums_from_monic, Poly};
use crate::scalar::{qi, Scalar, Q};
use num_complex::Complex64;
use std::fmt;

/// Root multiset of a monic polynomial, with explicit rational roots when
/// the polynomial splits over `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMultiset {
    poly: Poly,
    rational_roots: Option<Vec<Q>>,
}

impl NodeMultiset {
    pub fn from_poly(poly: Poly) -> Self {
        assert!(poly.is_monic(), "node multisets are defined by monic polynomials");
        let rational_roots = if poly.deg() == Some(0) {
            Some(Vec::new())
        } else {
            let factors = factor(&poly);
            if factors.iter().all(|(f, _)| f.deg() == Some(1)) {
                let mut roots = Vec::new();
                for (f, mult) in &factors {
                    let root = -f.coeff(0);
                    for _ in 0..*mult {
                        roots.push(root.clone());
                    }
                }
                roots.sort();
                Some(roots)
            } else {
                None
            }
        };
        NodeMultiset { poly, rational_roots }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Multiset size.
    pub fn len(&self) -> usize {
        self.poly.deg().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Present exactly when the polynomial splits over the rationals.
    pub fn rational_roots(&self) -> Option<&[Q]> {
        self.rational_roots.as_deref()
    }

    /// Power sums `p_0..p_{count-1}` of the root multiset, from the
    /// coefficients alone.
    pub fn power_sums(&self, count: usize) -> Vec<Q> {
        power_sums_from_monic(&self.poly, count)
    }

    /// Numerical roots, for the float path and for reports.
    pub fn approx_roots(&self) -> Vec<Complex64> {
        match &self.rational_roots {
            Some(roots) => roots.iter().map(|r| Complex64::new(crate::scalar::q_to_f64(r), 0.0)).collect(),
            None => {
                let coeffs: Vec<Complex64> = self
                    .poly
                    .coeffs()
                    .iter()
                    .map(|q| Complex64::new(crate::scalar::q_to_f64(q), 0.0))
                    .collect();
                poly_roots(&coeffs)
                    .into_iter()
                    .map(|z| {
                        // Strip iteration dust on genuinely real roots.
                        if z.im.abs() < 1e-30 * (1.0 + z.re.abs()) {
                            Complex64::new(z.re, 0.0)
                        } else {
                            z
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Completes a fixed node multiset to prescribed power-sum targets: returns
/// the multiset `{x_1..x_m}` (m = number of targets) with
/// `sum_i x_i^k = targets_k - sum_{v in fixed} v^k` for `k = 1..m`.
/// A solution always exists over the complex numbers; the polynomial is
/// returned unfactored when the roots are irrational.
pub fn powersum_complete(targets: &[Q], fixed: &[Q]) -> NodeMultiset {
    let m = targets.len();
    let residual: Vec<Q> = (1..=m as u32)
        .map(|k| {
            let mut acc = targets[k as usize - 1].clone();
            for v in fixed {
                acc -= v.pow_u(k);
            }
            acc
        })
        .collect();
    NodeMultiset::from_poly(monic_from_power_sums(&residual))
}

/// Float completion: explicit complex roots, always available.
pub fn powersum_complete_approx(targets: &[Complex64], fixed: &[Complex64]) -> Vec<Complex64> {
    let m = targets.len();
    if m == 0 {
        return Vec::new();
    }
    let residual: Vec<Complex64> = (1..=m as u32)
        .map(|k| {
            let mut acc = targets[k as usize - 1];
            for v in fixed {
                acc -= v.pow_u(k);
            }
            acc
        })
        .collect();
    poly_roots(&monic_from_power_sums_c(&residual))
}

/// One rank of a weight family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEntry {
    n: usize,
    /// First `r` coordinates of `mu`: the positive nodes.
    prefix: Vec<Q>,
    /// Middle block, as a node multiset of size `n - r - s`.
    completion: NodeMultiset,
    /// Last `s` coordinates of `mu`: the shifted negative nodes
    /// (`c_s + 1, ..., c_1 + 1`).
    suffix: Vec<Q>,
    valid_order: usize,
}

impl FamilyEntry {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn completion(&self) -> &NodeMultiset {
        &self.completion
    }

    /// Orders at which this entry realizes the target characters exactly.
    pub fn valid_order(&self) -> usize {
        self.valid_order
    }

    /// Explicit `mu`, when the completion splits over the rationals.
    pub fn mu_weight(&self) -> Option<Weight<Q>> {
        let roots = self.completion.rational_roots()?;
        let mut entries = self.prefix.clone();
        entries.extend(roots.iter().cloned());
        entries.extend(self.suffix.iter().cloned());
        Some(Weight::new(entries))
    }

    /// Explicit `lambda = mu + e_1 + ... + e_r - e_{n-s+1} - ... - e_n`.
    pub fn lambda_weight(&self) -> Option<Weight<Q>> {
        let roots = self.completion.rational_roots()?;
        let mut entries: Vec<Q> = self.prefix.iter().map(|b| b + qi(1)).collect();
        entries.extend(roots.iter().cloned());
        entries.extend(self.suffix.iter().map(|c| c - qi(1)));
        Some(Weight::new(entries))
    }

    /// `sum_i mu_i^k` for `k = 1..order`, exact even for symbolic entries.
    pub fn mu_moments(&self, order: usize) -> Vec<Q> {
        let sums = self.completion.power_sums(order + 1);
        (1..=order as u32)
            .map(|k| {
                let mut acc = sums[k as usize].clone();
                for b in &self.prefix {
                    acc += b.pow_u(k);
                }
                for c in &self.suffix {
                    acc += c.pow_u(k);
                }
                acc
            })
            .collect()
    }

    pub fn lambda_moments(&self, order: usize) -> Vec<Q> {
        let sums = self.completion.power_sums(order + 1);
        (1..=order as u32)
            .map(|k| {
                let mut acc = sums[k as usize].clone();
                for b in &self.prefix {
                    acc += (b + qi(1)).pow_u(k);
                }
                for c in &self.suffix {
                    acc += (c - qi(1)).pow_u(k);
                }
                acc
            })
            .collect()
    }

    pub fn mu_character(&self, order: usize) -> CentralCharacter<Q> {
        CentralCharacter::from_moments(self.mu_moments(order)).with_rank_tag(self.n)
    }

    pub fn lambda_character(&self, order: usize) -> CentralCharacter<Q> {
        CentralCharacter::from_moments(self.lambda_moments(order)).with_rank_tag(self.n)
    }
}

/// Family of weight pairs realizing a witness against a fixed `psi`, one
/// entry per rank in the requested range (ranks `<= r + s` carry none).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFamily {
    r: usize,
    s: usize,
    entries: Vec<FamilyEntry>,
}

impl WeightFamily {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn entries(&self) -> &[FamilyEntry] {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterpolateError {
    /// `psi` carries fewer moments than the largest requested rank needs.
    NeedMoreOrders { available: usize, required: usize },
    /// The exact path builds families from rational witnesses only.
    AlgebraicWitness,
}

impl fmt::Display for InterpolateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterpolateError::NeedMoreOrders { available, required } => {
                write!(f, "psi supplies {available} moments but the range needs {required}")
            }
            InterpolateError::AlgebraicWitness => {
                write!(f, "witness has non-rational nodes; use the float path")
            }
        }
    }
}

impl std::error::Error for InterpolateError {}

/// Builds the family for `n` in `n_lo..=n_hi`. Negative-node coordinates are
/// shifted by one on the way in, so the construction consumes plain-node
/// witnesses.
pub fn build_weight_family(
    witness: &Witness<Q>,
    psi: &CentralCharacter<Q>,
    n_lo: usize,
    n_hi: usize,
) -> Result<WeightFamily, InterpolateError> {
    if witness.has_algebraic_nodes() {
        return Err(InterpolateError::AlgebraicWitness);
    }
    let r = witness.r();
    let s = witness.s();
    let mut fixed: Vec<Q> = witness.b_nodes().to_vec();
    fixed.extend(witness.c_nodes().iter().map(|c| c + qi(1)));
    let mut suffix: Vec<Q> = witness.c_nodes().iter().map(|c| c + qi(1)).collect();
    suffix.reverse();
    let mut entries = Vec::new();
    for n in n_lo..=n_hi {
        if n <= r + s {
            continue;
        }
        let m = n - r - s;
        if psi.order() < m {
            return Err(InterpolateError::NeedMoreOrders {
                available: psi.order(),
                required: m,
            });
        }
        let targets: Vec<Q> = (1..=m).map(|k| psi.moment(k).clone()).collect();
        let completion = powersum_complete(&targets, &fixed);
        entries.push(FamilyEntry {
            n,
            prefix: witness.b_nodes().to_vec(),
            completion,
            suffix: suffix.clone(),
            valid_order: m,
        });
    }
    Ok(WeightFamily { r, s, entries })
}

/// One mismatch found by family verification.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyViolation {
    pub n: usize,
    pub order: usize,
    pub side: FamilySide,
    pub expected: Q,
    pub got: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySide {
    Lambda,
    Mu,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub comparisons: usize,
    pub violations: Vec<FamilyViolation>,
}

impl FamilyReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, exactly, that every entry's weights reproduce `chi` and `psi` at
/// all orders up to `min(K, n - r - s)`.
pub fn verify_weight_family(
    family: &WeightFamily,
    chi: &CentralCharacter<Q>,
    psi: &CentralCharacter<Q>,
) -> FamilyReport {
    let mut comparisons = 0;
    let mut violations = Vec::new();
    for entry in family.entries() {
        let k_max = entry.valid_order().min(chi.order()).min(psi.order());
        let lambda_m = entry.lambda_moments(k_max);
        let mu_m = entry.mu_moments(k_max);
        for k in 1..=k_max {
            comparisons += 2;
            if &lambda_m[k - 1] != chi.moment(k) {
                violations.push(FamilyViolation {
                    n: entry.n(),
                    order: k,
                    side: FamilySide::Lambda,
                    expected: chi.moment(k).clone(),
                    got: lambda_m[k - 1].clone(),
                });
            }
            if &mu_m[k - 1] != psi.moment(k) {
                violations.push(FamilyViolation {
                    n: entry.n(),
                    order: k,
                    side: FamilySide::Mu,
                    expected: psi.moment(k).clone(),
                    got: mu_m[k - 1].clone(),
                });
            }
        }
    }
    FamilyReport { comparisons, violations }
}

/// Float-mode family entry with explicit complex coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxFamilyEntry {
    pub n: usize,
    pub mu: Vec<Complex64>,
    pub lambda: Vec<Complex64>,
    pub valid_order: usize,
}

/// Float-mode family: completions are always explicit complex roots.
pub fn build_weight_family_approx(
    witness: &Witness<Complex64>,
    psi_moments: &[Complex64],
    n_lo: usize,
    n_hi: usize,
) -> Result<Vec<ApproxFamilyEntry>, InterpolateError> {
    let one = Complex64::new(1.0, 0.0);
    let r = witness.r();
    let s = witness.s();
    let mut fixed: Vec<Complex64> = witness.b_nodes().to_vec();
    fixed.extend(witness.c_nodes().iter().map(|c| c + one));
    let mut suffix: Vec<Complex64> = witness.c_nodes().iter().map(|c| c + one).collect();
    suffix.reverse();
    let mut out = Vec::new();
    for n in n_lo..=n_hi {
        if n <= r + s {
            continue;
        }
        let m = n - r - s;
        if psi_moments.len() < m {
            return Err(InterpolateError::NeedMoreOrders {
                available: psi_moments.len(),
                required: m,
            });
        }
        let roots = powersum_complete_approx(&psi_moments[..m], &fixed);
        let mut mu: Vec<Complex64> = witness.b_nodes().to_vec();
        mu.extend(roots.iter().copied());
        mu.extend(suffix.iter().copied());
        let mut lambda: Vec<Complex64> = witness.b_nodes().iter().map(|b| b + one).collect();
        lambda.extend(roots.iter().copied());
        lambda.extend(suffix.iter().map(|c| c - one));
        out.push(ApproxFamilyEntry {
            n,
            mu,
            lambda,
            valid_order: m,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charcenter::{character_difference, character_from_weight};
    use crate::expsum::{decide_nonvanishing, DecisionStatus};
    use crate::scalar::qr;
    use num_traits::Zero;

    fn w(entries: &[i64]) -> Weight<Q> {
        Weight::new(entries.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn completion_of_two_targets() {
        let nm = powersum_complete(&[qi(3), qi(5)], &[]);
        assert_eq!(nm.poly(), &Poly::from_ints(&[2, -3, 1]));
        assert_eq!(nm.rational_roots(), Some(&[qi(1), qi(2)][..]));
    }

    #[test]
    fn completion_with_fixed_nodes() {
        let nm = powersum_complete(&[qi(5)], &[qi(4), qi(0)]);
        assert_eq!(nm.poly(), &Poly::from_ints(&[-1, 1]));
        assert_eq!(nm.rational_roots(), Some(&[qi(1)][..]));
    }

    #[test]
    fn empty_completion() {
        let nm = powersum_complete(&[], &[qi(7)]);
        assert!(nm.is_empty());
        assert_eq!(nm.poly(), &Poly::one());
        assert_eq!(nm.rational_roots(), Some(&[][..]));
    }

    #[test]
    fn irrational_completion_keeps_polynomial() {
        // Residual power sums (0, 4): z^2 - 2, irrational roots.
        let nm = powersum_complete(&[qi(0), qi(4)], &[]);
        assert_eq!(nm.poly(), &Poly::from_ints(&[-2, 0, 1]));
        assert!(nm.rational_roots().is_none());
        // Power sums still exact.
        assert_eq!(nm.power_sums(5), vec![qi(2), qi(0), qi(4), qi(0), qi(8)]);
        // Root estimates are still available for reports.
        let roots = nm.approx_roots();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].re + 2f64.sqrt()).abs() < 1e-12 && roots[0].im == 0.0);
        assert!((roots[1].re - 2f64.sqrt()).abs() < 1e-12 && roots[1].im == 0.0);
    }

    #[test]
    fn newton_completion_round_trip() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..25 {
            let m = rng.gen_range(1..=6);
            let roots: Vec<Q> = (0..m).map(|_| qr(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
            let targets: Vec<Q> = (1..=m as u32)
                .map(|k| roots.iter().map(|x| x.pow_u(k)).fold(Q::zero(), |a, b| a + b))
                .collect();
            let nm = powersum_complete(&targets, &[]);
            let sums = nm.power_sums(m + 1);
            for (k, t) in targets.iter().enumerate() {
                assert_eq!(&sums[k + 1], t);
            }
        }
    }

    fn witness_b4_cm1() -> Witness<Q> {
        Witness::reduced(vec![qi(4)], vec![qi(-1)])
    }

    #[test]
    fn family_matches_worked_example() {
        let psi = character_from_weight(&w(&[4, 1, 0]), 8);
        let family = build_weight_family(&witness_b4_cm1(), &psi, 3, 3).unwrap();
        assert_eq!(family.entries().len(), 1);
        let entry = &family.entries()[0];
        assert_eq!(entry.mu_weight().unwrap(), w(&[4, 1, 0]));
        assert_eq!(entry.lambda_weight().unwrap(), w(&[5, 1, -1]));
        assert_eq!(entry.valid_order(), 1);
    }

    #[test]
    fn family_with_repeated_completion_root() {
        let psi = character_from_weight(&w(&[4, 1, 1, 0]), 8);
        let family = build_weight_family(&witness_b4_cm1(), &psi, 4, 4).unwrap();
        let entry = &family.entries()[0];
        assert_eq!(entry.completion().poly(), &Poly::from_ints(&[1, -2, 1]));
        assert_eq!(entry.mu_weight().unwrap(), w(&[4, 1, 1, 0]));
        assert_eq!(entry.lambda_weight().unwrap(), w(&[5, 1, 1, -1]));
    }

    #[test]
    fn ranks_at_or_below_witness_size_are_skipped() {
        let psi = character_from_weight(&w(&[4, 1, 0]), 8);
        let family = build_weight_family(&witness_b4_cm1(), &psi, 1, 2).unwrap();
        assert!(family.entries().is_empty());
    }

    #[test]
    fn family_needs_enough_psi_orders() {
        let psi = character_from_weight(&w(&[4, 1, 0]), 2);
        let err = build_weight_family(&witness_b4_cm1(), &psi, 6, 6).unwrap_err();
        assert_eq!(err, InterpolateError::NeedMoreOrders { available: 2, required: 4 });
    }

    #[test]
    fn verify_passes_on_constructed_family() {
        let psi = character_from_weight(&w(&[4, 1, 0]), 8);
        let witness = witness_b4_cm1();
        let family = build_weight_family(&witness, &psi, 3, 10).unwrap();
        // chi moments: psi plus the witness difference.
        let chi_moments: Vec<Q> = (1..=8)
            .map(|k| {
                psi.moment(k) + crate::series::pk_eval(k as u32, &qi(4)) - crate::series::pk_eval(k as u32, &qi(-1))
            })
            .collect();
        let chi = CentralCharacter::from_moments(chi_moments);
        let report = verify_weight_family(&family, &chi, &psi);
        assert!(report.pass(), "violations: {:?}", report.violations);
        assert!(report.comparisons > 0);
    }

    #[test]
    fn verify_flags_a_perturbed_entry() {
        let psi = character_from_weight(&w(&[4, 1, 0]), 8);
        let witness = witness_b4_cm1();
        let family = build_weight_family(&witness, &psi, 3, 3).unwrap();
        // Perturb mu by replacing the completion target: verify against the
        // character of (4,2,0) instead.
        let wrong_psi = character_from_weight(&w(&[4, 2, 0]), 8);
        let report = verify_weight_family(&family, &character_from_weight(&w(&[5, 1, -1]), 8), &wrong_psi);
        assert!(!report.pass());
        assert_eq!(report.violations[0].n, 3);
        assert_eq!(report.violations[0].order, 1);
        assert_eq!(report.violations[0].side, FamilySide::Mu);
        // Empty families pass vacuously.
        let empty = WeightFamily { r: 1, s: 1, entries: Vec::new() };
        assert!(verify_weight_family(&empty, &wrong_psi, &wrong_psi).pass());
    }

    #[test]
    fn family_coherent_with_decision_procedure() {
        // Integral witness with distinct nodes; family characters at the
        // valid order must hand the witness back through the decision path.
        let witness = Witness::reduced(vec![qi(2), qi(0)], vec![qi(-3)]);
        let psi = character_from_weight(&w(&[5, 3, 1, 0, -2, 4, 6, -1, 7, 2, 8, -4]), 12);
        let family = build_weight_family(&witness, &psi, 10, 10).unwrap();
        let entry = &family.entries()[0];
        let order = entry.valid_order(); // 7 >= 2 * 3 + 1
        let chi = entry.lambda_character(order);
        let mu = entry.mu_character(order);
        let decision = decide_nonvanishing(&chi, &mu, 3).unwrap();
        assert_eq!(decision.status, DecisionStatus::NonzeroWitness);
        let got = decision.witness.unwrap();
        assert_eq!(got.b_nodes(), &[qi(0), qi(2)]);
        assert_eq!(got.c_nodes(), &[qi(-3)]);
    }

    #[test]
    fn shift_identity_holds_along_family_entries() {
        // lambda - mu steps through single-coordinate shifts, so the moment
        // difference must match the closed lemma form.
        let witness = Witness::reduced(vec![qi(3)], vec![qi(1)]);
        let psi = character_from_weight(&w(&[3, 4, 0, 2]), 10);
        let family = build_weight_family(&witness, &psi, 5, 8).unwrap();
        for entry in family.entries() {
            if let (Some(lambda), Some(mu)) = (entry.lambda_weight(), entry.mu_weight()) {
                let k = entry.valid_order();
                let chi_c = character_from_weight(&lambda, k);
                let psi_c = character_from_weight(&mu, k);
                let d = character_difference(&chi_c, &psi_c).unwrap();
                let (expected, _) = crate::charcenter::lemma9_difference(&mu, 1, 1, k).unwrap();
                assert_eq!(d, expected, "n={}", entry.n());
            }
        }
    }

    #[test]
    fn approx_family_matches_exact_on_rational_data() {
        let witness = Witness::reduced(vec![qi(4)], vec![qi(-1)]);
        let psi = character_from_weight(&w(&[4, 1, 0]), 8);
        let exact = build_weight_family(&witness, &psi, 3, 6).unwrap();
        let witness_c = Witness::reduced(
            vec![Complex64::new(4.0, 0.0)],
            vec![Complex64::new(-1.0, 0.0)],
        );
        let psi_c: Vec<Complex64> = (1..=8)
            .map(|k| Complex64::new(crate::scalar::q_to_f64(psi.moment(k)), 0.0))
            .collect();
        let approx = build_weight_family_approx(&witness_c, &psi_c, 3, 6).unwrap();
        assert_eq!(exact.entries().len(), approx.len());
        for (e, a) in exact.entries().iter().zip(&approx) {
            assert_eq!(e.n(), a.n);
            let exact_mu: Vec<Complex64> = e
                .mu_weight()
                .map(|mw| mw.entries().iter().map(|q| Complex64::new(crate::scalar::q_to_f64(q), 0.0)).collect())
                .unwrap_or_default();
            if exact_mu.is_empty() {
                continue;
            }
            // Compare as multisets of power sums (coordinate order of the
            // completion block is not canonical).
            for k in 1..=2u32 {
                let se: Complex64 = exact_mu.iter().map(|x| x.powu(k)).sum();
                let sa: Complex64 = a.mu.iter().map(|x| x.powu(k)).sum();
                assert!((se - sa).norm() < 1e-8);
            }
        }
    }
}
