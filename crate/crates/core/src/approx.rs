//! Floating-point path for non-rational node data.
//!
//! The float pipeline mirrors the exact one but replaces factorization with
//! numerical root finding and replaces exact zero tests with a tolerance
//! context. Robustness comes from end-to-end acceptance rather than from
//! trusting any single threshold: for each candidate recurrence length the
//! pipeline fits a monic annihilator by least squares on geometrically
//! scaled data, roots it (Aberth–Ehrlich), rounds the solved weights to
//! integers, polishes the nodes by Gauss–Newton with the integer weights
//! pinned, and only accepts if the reconstructed witness reproduces every
//! supplied moment within tolerance. Candidates that fail verification fall
//! through to the next length.
//!
//! Accuracy is bounded by the conditioning of the node-recovery problem in
//! doubles: many clustered nodes can push the attainable node error toward
//! `1e-9` even though the recovered integer weights stay exact. The exact
//! path is the reference wherever the inputs are rational.

use crate::expsum::{DecisionStatus, Witness};
use crate::scalar::Tol;
use crate::series::{divide_by_expm1, pk_eval, MomentKind, MomentSequence};
use num_complex::Complex64;

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// Roots of a monic polynomial (ascending coefficients) by simultaneous
/// Aberth–Ehrlich iteration. Deterministic; degrees here stay below ~16.
pub fn poly_roots(coeffs: &[C]) -> Vec<C> {
    let d = coeffs.len() - 1;
    assert!(d >= 1 && (coeffs[d] - c(1.0)).norm() < 1e-12, "monic input expected");
    if d == 1 {
        return vec![-coeffs[0]];
    }
    let radius = 1.0 + coeffs[..d].iter().map(|a| a.norm()).fold(0.0f64, f64::max);
    let centroid = -coeffs[d - 1] / c(d as f64);
    let mut z: Vec<C> = (0..d)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            centroid + c(0.7 * radius) * C::new(angle.cos(), angle.sin())
        })
        .collect();
    for _ in 0..200 {
        let mut moved = 0.0f64;
        let snapshot = z.clone();
        for i in 0..d {
            let (p, dp) = eval_with_derivative(coeffs, snapshot[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() > 1e-300 { p / dp } else { p };
            let mut sum = C::new(0.0, 0.0);
            for (j, zj) in snapshot.iter().enumerate() {
                if j != i {
                    let diff = snapshot[i] - zj;
                    if diff.norm() > 1e-300 {
                        sum += c(1.0) / diff;
                    }
                }
            }
            let denom = c(1.0) - w * sum;
            let delta = if denom.norm() > 1e-12 { w / denom } else { w };
            z[i] -= delta;
            moved = moved.max(delta.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    z
}

fn eval_with_derivative(coeffs: &[C], x: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for a in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// Elementary symmetric functions from power sums, complex arithmetic.
pub fn elementary_from_power_sums_c(p: &[C]) -> Vec<C> {
    let m = p.len();
    let mut e: Vec<C> = Vec::with_capacity(m);
    for k in 1..=m {
        let mut acc = C::new(0.0, 0.0);
        for i in 1..=k {
            let prev = if i == k { c(1.0) } else { e[k - i - 1] };
            let term = prev * p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / c(k as f64));
    }
    e
}

/// Monic polynomial (ascending coefficients) with prescribed power sums.
pub fn monic_from_power_sums_c(p: &[C]) -> Vec<C> {
    let m = p.len();
    let e = elementary_from_power_sums_c(p);
    let mut coeffs = vec![C::new(0.0, 0.0); m + 1];
    coeffs[m] = c(1.0);
    for k in 1..=m {
        coeffs[m - k] = if k % 2 == 1 { -e[k - 1] } else { e[k - 1] };
    }
    coeffs
}

/// Least squares `min |A x - y|` by Householder QR; `rows >= cols` and the
/// system is consumed. Returns nothing when a column collapses to zero.
fn qr_lstsq(mut a: Vec<Vec<C>>, mut y: Vec<C>) -> Option<Vec<C>> {
    let rows = a.len();
    let cols = a.first()?.len();
    if rows < cols {
        return None;
    }
    for k in 0..cols {
        // Householder reflector for column k below the diagonal.
        let norm_x: f64 = (k..rows).map(|r| a[r][k].norm_sqr()).sum::<f64>().sqrt();
        if norm_x < 1e-300 {
            return None;
        }
        let x0 = a[k][k];
        let phase = if x0.norm() > 0.0 { x0 / c(x0.norm()) } else { c(1.0) };
        let alpha = -phase * c(norm_x);
        let mut v: Vec<C> = (k..rows).map(|r| a[r][k]).collect();
        v[0] -= alpha;
        let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sqr > 1e-300 {
            for j in k..cols {
                let mut dot = C::new(0.0, 0.0);
                for (i, vi) in v.iter().enumerate() {
                    dot += vi.conj() * a[k + i][j];
                }
                let factor = dot * c(2.0 / v_norm_sqr);
                for (i, vi) in v.iter().enumerate() {
                    a[k + i][j] -= factor * vi;
                }
            }
            let mut dot = C::new(0.0, 0.0);
            for (i, vi) in v.iter().enumerate() {
                dot += vi.conj() * y[k + i];
            }
            let factor = dot * c(2.0 / v_norm_sqr);
            for (i, vi) in v.iter().enumerate() {
                y[k + i] -= factor * vi;
            }
        }
    }
    // Back-substitution on the upper-triangular part.
    let mut x = vec![C::new(0.0, 0.0); cols];
    for row in (0..cols).rev() {
        let mut acc = y[row];
        for k in row + 1..cols {
            acc -= a[row][k] * x[k];
        }
        if a[row][row].norm() < 1e-300 {
            return None;
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Least squares with row and column equilibration: each equation is scaled
/// to unit max magnitude, each column to unit norm. Keeps mixed-magnitude
/// node systems solvable in doubles.
fn lstsq(a: &[Vec<C>], y: &[C]) -> Option<Vec<C>> {
    let rows = a.len();
    let cols = a.first()?.len();
    let mut row_scale = vec![1.0f64; rows];
    for r in 0..rows {
        let m = a[r]
            .iter()
            .map(|z| z.norm())
            .chain(std::iter::once(y[r].norm()))
            .fold(0.0f64, f64::max);
        row_scale[r] = if m > 1e-300 { 1.0 / m } else { 1.0 };
    }
    let mut col_scale = vec![1.0f64; cols];
    for j in 0..cols {
        let m = (0..rows).map(|r| a[r][j].norm() * row_scale[r]).fold(0.0f64, f64::max);
        col_scale[j] = if m > 1e-300 { 1.0 / m } else { 1.0 };
    }
    let scaled: Vec<Vec<C>> = (0..rows)
        .map(|r| (0..cols).map(|j| a[r][j] * c(row_scale[r] * col_scale[j])).collect())
        .collect();
    let scaled_y: Vec<C> = (0..rows).map(|r| y[r] * c(row_scale[r])).collect();
    let x = qr_lstsq(scaled, scaled_y)?;
    Some(x.iter().zip(&col_scale).map(|(xi, s)| xi * c(*s)).collect())
}

/// Recovered float-form exponential sum: distinct nodes with integer weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxExponential {
    pub nodes: Vec<C>,
    pub weights: Vec<i64>,
}

impl ApproxExponential {
    pub fn moment(&self, k: u32) -> C {
        self.moment_with_mass(k).0
    }

    /// Moment value together with the total magnitude of the summed terms;
    /// the mass bounds what any double evaluation of the same sum can
    /// resolve, so verification tolerances scale by it.
    pub fn moment_with_mass(&self, k: u32) -> (C, f64) {
        let mut acc = C::new(0.0, 0.0);
        let mut mass = 0.0f64;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let term = pk_eval(k, x) * c(*w as f64);
            mass += term.norm();
            acc += term;
        }
        (acc, mass)
    }
}

/// Float analogue of the decision result.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxDecision {
    pub status: DecisionStatus,
    pub witness: Option<Witness<C>>,
    pub exponential: Option<ApproxExponential>,
    pub rank: Option<usize>,
    pub verified_order: usize,
}

/// Float decision pipeline on a difference sequence.
pub fn decide_from_difference_approx(d: &MomentSequence<C>, max_nodes: usize, tol: Tol) -> ApproxDecision {
    assert_eq!(d.kind(), MomentKind::Difference);
    let order = d.order();
    if order < 2 * max_nodes + 1 {
        return ApproxDecision {
            status: DecisionStatus::Inconclusive,
            witness: None,
            exponential: None,
            rank: None,
            verified_order: order,
        };
    }
    let t = divide_by_expm1(d);
    let tv = t.coeffs();
    let n = tv.len();

    let mut saw_fit_without_witness = false;
    for rank in 0..=max_nodes {
        // Candidate monic annihilator from the equilibrated window system
        // sum_{a<rank} q_a t_{m+a} = -t_{m+rank}.
        let q: Vec<C> = if rank == 0 {
            vec![c(1.0)]
        } else {
            let rows = n - rank;
            let a: Vec<Vec<C>> = (0..rows).map(|m| (0..rank).map(|j| tv[m + j]).collect()).collect();
            let y: Vec<C> = (0..rows).map(|m| -tv[m + rank]).collect();
            let Some(x) = lstsq(&a, &y) else { continue };
            let mut q = x;
            q.push(c(1.0));
            q
        };
        // Recurrence residual, each window judged relative to its own size.
        let mut resid = 0.0f64;
        for m in 0..n - rank {
            let mut acc = C::new(0.0, 0.0);
            let mut window = 0.0f64;
            for (a, qa) in q.iter().enumerate() {
                acc += *qa * tv[m + a];
                window = window.max(tv[m + a].norm() * qa.norm());
            }
            resid = resid.max(acc.norm() / window.max(1.0));
        }
        if resid > tol.eps.sqrt() {
            continue;
        }
        if rank == 0 {
            // Everything is (numerically) zero: the empty witness.
            let ok = (1..=order).all(|k| tol.eq_scaled(*d.entry(k), C::new(0.0, 0.0)));
            if ok {
                return ApproxDecision {
                    status: DecisionStatus::NonzeroWitness,
                    witness: Some(Witness::empty()),
                    exponential: Some(ApproxExponential {
                        nodes: Vec::new(),
                        weights: Vec::new(),
                    }),
                    rank: Some(0),
                    verified_order: order,
                };
            }
            continue;
        }
        if let Some(exp) = try_recover(tv, &q, rank, d, tol) {
            let witness = witness_from_approx(&exp);
            return ApproxDecision {
                status: DecisionStatus::NonzeroWitness,
                witness: Some(witness),
                exponential: Some(exp),
                rank: Some(rank),
                verified_order: order,
            };
        }
        saw_fit_without_witness = true;
    }
    ApproxDecision {
        status: if saw_fit_without_witness {
            DecisionStatus::NotExponentialForm
        } else {
            DecisionStatus::NoWitnessWithinBound
        },
        witness: None,
        exponential: None,
        rank: None,
        verified_order: order,
    }
}

fn try_recover(tv: &[C], q: &[C], rank: usize, d: &MomentSequence<C>, tol: Tol) -> Option<ApproxExponential> {
    let n = tv.len();
    let mut nodes = poly_roots(q);
    // Repeated recurrence roots mean polynomial-times-exponential terms,
    // which the target form cannot carry.
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if (nodes[i] - nodes[j]).norm() < 1e-6 * (1.0 + nodes[i].norm()) {
                return None;
            }
        }
    }
    // Weights from the full Vandermonde system (equilibrated internally).
    let v: Vec<Vec<C>> = (0..n)
        .map(|j| nodes.iter().map(|x| x.powu(j as u32)).collect())
        .collect();
    let w = lstsq(&v, tv)?;
    let mut weights = Vec::with_capacity(rank);
    for wi in &w {
        let rounded = wi.re.round();
        if (wi.re - rounded).abs() > 0.25 || wi.im.abs() > 0.25 || rounded == 0.0 || rounded.abs() > 1e15 {
            return None;
        }
        weights.push(rounded as i64);
    }
    // Gauss-Newton polish of the nodes with the integer weights pinned,
    // minimizing residuals relative to each coefficient's magnitude.
    let row_scale: Vec<f64> = tv.iter().map(|t| 1.0 / t.norm().max(1.0)).collect();
    let eval_resid = |nodes: &[C]| -> Vec<C> {
        (0..n)
            .map(|j| {
                let mut acc = C::new(0.0, 0.0);
                for (x, w) in nodes.iter().zip(&weights) {
                    acc += c(*w as f64) * x.powu(j as u32);
                }
                (tv[j] - acc) * c(row_scale[j])
            })
            .collect()
    };
    let resid_norm = |r: &[C]| r.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut best_resid = resid_norm(&eval_resid(&nodes));
    for _ in 0..10 {
        let jac: Vec<Vec<C>> = (0..n)
            .map(|j| {
                nodes
                    .iter()
                    .zip(&weights)
                    .map(|(x, w)| {
                        if j == 0 {
                            C::new(0.0, 0.0)
                        } else {
                            c(*w as f64) * c(j as f64) * x.powu(j as u32 - 1) * c(row_scale[j])
                        }
                    })
                    .collect()
            })
            .collect();
        let resid = eval_resid(&nodes);
        let Some(dx) = lstsq(&jac, &resid) else { break };
        // Step with halving in case the full correction overshoots.
        let mut accepted = false;
        let mut step_scale = 1.0f64;
        for _ in 0..4 {
            let candidate: Vec<C> = nodes.iter().zip(&dx).map(|(x, s)| x + s * c(step_scale)).collect();
            let cand_resid = resid_norm(&eval_resid(&candidate));
            if cand_resid < best_resid {
                best_resid = cand_resid;
                nodes = candidate;
                accepted = true;
                break;
            }
            step_scale *= 0.5;
        }
        if !accepted {
            break;
        }
        if best_resid < 1e-30 {
            break;
        }
    }
    let exp = ApproxExponential {
        nodes,
        weights,
    };
    // End-to-end acceptance: the integer-weight witness must reproduce every
    // supplied moment within tolerance (scaled by moment magnitude).
    for k in 1..=d.order() {
        let (got, mass) = exp.moment_with_mass(k as u32);
        let want = *d.entry(k);
        // Heavily cancelling sums cannot be reproduced more tightly than
        // their term mass times the machine epsilon, whatever the nodes.
        let scale = 1f64.max(want.norm()).max(mass * 1e-7);
        if (got - want).norm() > tol.eps * scale {
            return None;
        }
    }
    Some(exp)
}

fn witness_from_approx(exp: &ApproxExponential) -> Witness<C> {
    let mut b = Vec::new();
    let mut cc = Vec::new();
    for (x, w) in exp.nodes.iter().zip(&exp.weights) {
        let bucket = if *w > 0 { &mut b } else { &mut cc };
        for _ in 0..w.unsigned_abs() {
            bucket.push(*x);
        }
    }
    let order = |a: &C, z: &C| a.re.total_cmp(&z.re).then(a.im.total_cmp(&z.im));
    b.sort_by(order);
    cc.sort_by(order);
    Witness::reduced(b, cc)
}

/// Float moment sequence from rational data, for mode crossovers.
pub fn moments_to_c(d: &MomentSequence<crate::scalar::Q>) -> MomentSequence<C> {
    MomentSequence::new(
        d.kind(),
        d.entries().iter().map(|q| c(crate::scalar::q_to_f64(q))).collect(),
    )
}
