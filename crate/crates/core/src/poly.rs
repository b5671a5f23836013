//! Dense univariate polynomials over the rationals: exact arithmetic,
//! gcd/square-free structure, Newton's identities, and factorization into
//! irreducibles.
//!
//! Factorization reduces to the monic integer case (clear denominators, then
//! substitute `y = c x` against the leading coefficient), factors modulo a
//! small prime with Berlekamp's algorithm, lifts with iterated linear Hensel
//! steps past a Mignotte-style coefficient bound, and recombines modular
//! factors by subset trial division. Degrees stay small throughout this
//! crate, so the simple quadratic-time versions of every step are fine.

use crate::scalar::{qi, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Polynomial over `Q`, coefficients ascending, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// Monomial `x`.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![Q::zero(), Q::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| qi(c)).collect())
    }

    /// Monic linear factor `x - root`.
    pub fn linear(root: &Q) -> Self {
        Poly::from_coeffs(vec![-root.clone(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; `rhs` must be nonzero.
    pub fn divrem(&self, rhs: &Poly) -> (Poly, Poly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let d = rhs.deg().unwrap();
        let lc = rhs.leading();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Q::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let factor = rem.last().unwrap() / &lc;
            if !factor.is_zero() {
                for (i, b) in rhs.coeffs.iter().enumerate() {
                    let v = &factor * b;
                    rem[k + i] -= v;
                }
                quo[k] = factor;
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, rhs: &Poly) -> Poly {
        self.divrem(rhs).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, rhs: &Poly) -> Poly {
        let (q, r) = self.divrem(rhs);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading();
        self.scale(&(Q::one() / lc))
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * qi(i as i64))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended Euclid: inverse of `self` modulo `m`, if the two are coprime.
    pub fn inverse_mod(&self, m: &Poly) -> Option<Poly> {
        let mut r0 = m.clone();
        let mut r1 = self.rem(m);
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one();
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.deg() != Some(0) {
            return None;
        }
        Some(t0.scale(&(Q::one() / r0.coeff(0))).rem(m))
    }

    pub fn is_squarefree(&self) -> bool {
        if self.deg().map_or(true, |d| d <= 1) {
            return true;
        }
        self.gcd(&self.derivative()).deg() == Some(0)
    }

    /// Deterministic order: by degree, then by coefficients from the top.
    pub fn cmp_structural(&self, rhs: &Poly) -> Ordering {
        match self.coeffs.len().cmp(&rhs.coeffs.len()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.coeffs.iter().rev().zip(rhs.coeffs.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// Product of monic linear factors over a node multiset.
pub fn poly_from_roots(roots: &[Q]) -> Poly {
    let mut acc = Poly::one();
    for r in roots {
        acc = acc.mul(&Poly::linear(r));
    }
    acc
}

/// Power sums `p_0..p_{count-1}` of the root multiset of a monic polynomial,
/// via Newton's identities on the coefficients (no root extraction).
pub fn power_sums_from_monic(f: &Poly, count: usize) -> Vec<Q> {
    assert!(f.is_monic(), "power sums need a monic polynomial");
    let m = f.deg().unwrap();
    // e_k with sign: f = x^m - e_1 x^{m-1} + e_2 x^{m-2} - ...
    let e: Vec<Q> = (1..=m)
        .map(|k| {
            let c = f.coeff(m - k);
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    let mut p = Vec::with_capacity(count);
    if count == 0 {
        return p;
    }
    p.push(qi(m as i64));
    for k in 1..count {
        let mut acc = Q::zero();
        for i in 1..=(k - 1).min(m) {
            let term = &e[i - 1] * &p[k - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= m {
            let tail = &e[k - 1] * qi(k as i64);
            if k % 2 == 1 {
                acc += tail;
            } else {
                acc -= tail;
            }
        }
        p.push(acc);
    }
    p
}

/// Elementary symmetric functions `e_1..e_m` from power sums `p_1..p_m`.
pub fn elementary_from_power_sums(p: &[Q]) -> Vec<Q> {
    let m = p.len();
    let mut e: Vec<Q> = Vec::with_capacity(m);
    for k in 1..=m {
        let mut acc = Q::zero();
        for i in 1..=k {
            let prev = if i == k { Q::one() } else { e[k - i - 1].clone() };
            let term = prev * &p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / qi(k as i64));
    }
    e
}

/// Monic polynomial of degree `m` whose root multiset has the given power
/// sums `p_1..p_m`.
pub fn monic_from_power_sums(p: &[Q]) -> Poly {
    let m = p.len();
    let e = elementary_from_power_sums(p);
    let mut coeffs = vec![Q::zero(); m + 1];
    coeffs[m] = Q::one();
    for k in 1..=m {
        coeffs[m - k] = if k % 2 == 1 { -e[k - 1].clone() } else { e[k - 1].clone() };
    }
    Poly::from_coeffs(coeffs)
}

/// Yun square-free decomposition of a monic polynomial: pairs
/// `(a_i, i)` with `f = prod a_i^i`, each `a_i` monic square-free.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let f = f.monic();
    let d = match f.deg() {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    let _ = d;
    let g = f.gcd(&f.derivative());
    if g.deg() == Some(0) {
        return vec![(f, 1)];
    }
    let mut out = Vec::new();
    let mut c = f.div_exact(&g);
    let mut w = f.derivative().div_exact(&g).sub(&c.derivative());
    let mut i = 1;
    while c.deg().map_or(false, |d| d > 0) {
        let a = c.gcd(&w);
        if a.deg().map_or(false, |d| d > 0) {
            out.push((a.clone(), i));
        }
        c = c.div_exact(&a);
        w = w.div_exact(&a).sub(&c.derivative());
        i += 1;
    }
    out
}

/// Factors an arbitrary nonzero polynomial into monic irreducibles with
/// multiplicities, sorted structurally.
pub fn factor(f: &Poly) -> Vec<(Poly, usize)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic()) {
        for irr in factor_monic_squarefree(&part) {
            out.push((irr, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp_structural(&b.0).then(a.1.cmp(&b.1)));
    out
}

/// Monic irreducible factors of a monic square-free polynomial over `Q`.
pub fn factor_monic_squarefree(f: &Poly) -> Vec<Poly> {
    assert!(f.is_monic());
    let d = f.deg().unwrap();
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![f.clone()];
    }
    // Clear denominators and pass to a primitive integer polynomial.
    let mut den = BigInt::one();
    for c in f.coeffs() {
        den = den.lcm(c.denom());
    }
    let int_coeffs: Vec<BigInt> = f.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let zf = ZPoly::new(int_coeffs).primitive();
    let c = zf.leading().clone();
    let z_factors = if c.is_one() {
        factor_monic_squarefree_z(&zf)
    } else {
        // Substitute y = c x to reach a monic integer polynomial.
        let monic = zf.scale_to_monic();
        factor_monic_squarefree_z(&monic)
            .into_iter()
            .map(|g| g.unscale_roots(&c))
            .collect()
    };
    let mut out: Vec<Poly> = z_factors.iter().map(|g| g.to_q_monic()).collect();
    out.sort_by(|a, b| a.cmp_structural(b));
    debug_assert_eq!(out.iter().map(|g| g.deg().unwrap()).sum::<usize>(), d);
    out
}

// ---------------------------------------------------------------------------
// Integer polynomials

#[derive(Debug, Clone, PartialEq, Eq)]
struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    fn deg(&self) -> usize {
        assert!(!self.coeffs.is_empty());
        self.coeffs.len() - 1
    }

    fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    fn primitive(&self) -> ZPoly {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if self.leading().is_negative() {
            g = -g;
        }
        ZPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// For `F` with leading coefficient `c`: returns the monic
    /// `R(y) = c^{d-1} F(y/c)`; roots of `R` are `c` times roots of `F`.
    fn scale_to_monic(&self) -> ZPoly {
        let d = self.deg();
        let c = self.leading().clone();
        let mut coeffs = Vec::with_capacity(d + 1);
        for (i, a) in self.coeffs.iter().enumerate() {
            // a_i * c^{d-1-i}; at i = d this is a_d / c = 1.
            if i == d {
                coeffs.push(BigInt::one());
            } else {
                coeffs.push(a * c.pow((d - 1 - i) as u32));
            }
        }
        ZPoly::new(coeffs)
    }

    /// Inverse of `scale_to_monic` on factors: maps monic `g(y)` to the
    /// monic rational image of `g(c x)` and back to a primitive integer
    /// polynomial representing the same monic factor.
    fn unscale_roots(&self, c: &BigInt) -> ZPoly {
        // g(c x) has coefficients g_i c^i; dividing by c^e keeps it monic
        // over Q; re-clear denominators to a primitive integer poly.
        let e = self.deg();
        let q_coeffs: Vec<Q> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| Q::new(a * c.pow(i as u32), c.pow(e as u32)))
            .collect();
        let mut den = BigInt::one();
        for q in &q_coeffs {
            den = den.lcm(q.denom());
        }
        ZPoly::new(q_coeffs.iter().map(|q| q.numer() * (&den / q.denom())).collect()).primitive()
    }

    fn to_q_monic(&self) -> Poly {
        let lc = Q::from_integer(self.leading().clone());
        Poly::from_coeffs(self.coeffs.iter().map(|c| Q::from_integer(c.clone()) / &lc).collect())
    }

    fn mul(&self, rhs: &ZPoly) -> ZPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ZPoly::new(coeffs)
    }

    fn sub(&self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &ZPoly, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
        ZPoly::new((0..n).map(|i| get(self, i) - get(rhs, i)).collect())
    }

    /// Division by a monic divisor; returns `(quotient, remainder)`.
    fn divrem_monic(&self, rhs: &ZPoly) -> (ZPoly, ZPoly) {
        assert!(rhs.leading().is_one());
        let d = rhs.deg();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigInt::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let factor = rem.last().unwrap().clone();
            if !factor.is_zero() {
                for (i, b) in rhs.coeffs.iter().enumerate() {
                    let v = &factor * b;
                    rem[k + i] -= v;
                }
                quo[k] = factor;
            }
            rem.pop();
        }
        (ZPoly::new(quo), ZPoly::new(rem))
    }

    fn reduce_mod(&self, m: &BigInt) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Coefficients mapped into `(-m/2, m/2]`.
    fn balanced_mod(&self, m: &BigInt) -> ZPoly {
        let half = m / 2;
        ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    fn to_fp(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        fp_normalize(self.coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
    }

    fn norm1(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

/// Zassenhaus on a monic square-free primitive integer polynomial.
fn factor_monic_squarefree_z(f: &ZPoly) -> Vec<ZPoly> {
    let d = f.deg();
    if d <= 1 {
        return vec![f.clone()];
    }
    // Prime with square-free reduction; square-freeness over Q guarantees
    // all but finitely many primes qualify.
    let p = pick_prime(f);
    let fp = f.to_fp(p);
    let modular = berlekamp_factor(&fp, p);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Lift past twice the factor coefficient bound.
    let bound = BigInt::from(2u32).pow(d as u32) * f.norm1();
    let mut exp = 1u32;
    let mut modulus = BigInt::from(p);
    while modulus <= &bound * 2 {
        modulus *= p;
        exp += 1;
    }
    let lifted = hensel_lift_tree(f, &modular, p, exp);
    recombine(f.clone(), lifted, &modulus)
}

fn pick_prime(f: &ZPoly) -> u64 {
    const PRIMES: [u64; 25] = [
        3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
    ];
    for &p in &PRIMES {
        let fp = f.to_fp(p);
        if fp.len() != f.deg() + 1 {
            continue; // leading coefficient vanished (cannot happen for monic f)
        }
        let der = fp_derivative(&fp, p);
        if fp_gcd(&fp, &der, p).len() == 1 {
            return p;
        }
    }
    // Extremely unlikely for the degrees in play; scan further primes.
    let mut p = 103u64;
    loop {
        if is_prime_u64(p) {
            let fp = f.to_fp(p);
            if fp.len() == f.deg() + 1 && fp_gcd(&fp, &fp_derivative(&fp, p), p).len() == 1 {
                return p;
            }
        }
        p += 2;
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Subset recombination of lifted modular factors by trial division.
fn recombine(mut f: ZPoly, mut modular: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= modular.len() {
        let mut advanced = false;
        for combo in combinations(modular.len(), size) {
            let mut cand = ZPoly::new(vec![BigInt::one()]);
            for &i in &combo {
                cand = cand.mul(&modular[i]).reduce_mod(modulus);
            }
            let cand = cand.balanced_mod(modulus);
            let (q, r) = f.divrem_monic(&cand);
            if r.coeffs.is_empty() {
                out.push(cand);
                f = q;
                let drop: std::collections::BTreeSet<usize> = combo.into_iter().collect();
                let mut kept = Vec::with_capacity(modular.len() - size);
                for (i, g) in modular.into_iter().enumerate() {
                    if !drop.contains(&i) {
                        kept.push(g);
                    }
                }
                modular = kept;
                advanced = true;
                break;
            }
        }
        if !advanced {
            size += 1;
        }
    }
    if !f.coeffs.is_empty() && f.deg() > 0 {
        out.push(f);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Lifts `f = prod(modular) mod p` to the same factorization mod `p^exp`
/// with a binary factor tree; all polynomials monic.
fn hensel_lift_tree(f: &ZPoly, modular: &[FpPoly], p: u64, exp: u32) -> Vec<ZPoly> {
    if modular.len() == 1 {
        let m = BigInt::from(p).pow(exp);
        return vec![f.reduce_mod(&m)];
    }
    let mid = modular.len() / 2;
    let g0 = fp_product(&modular[..mid], p);
    let h0 = fp_product(&modular[mid..], p);
    let (g, h) = hensel_pair_lift(f, &g0, &h0, p, exp);
    let mut out = hensel_lift_tree(&g, &modular[..mid], p, exp);
    out.extend(hensel_lift_tree(&h, &modular[mid..], p, exp));
    out
}

/// Linear Hensel iteration for a coprime monic pair: from `f = g h (mod p)`
/// to `f = g h (mod p^exp)`.
fn hensel_pair_lift(f: &ZPoly, g0: &FpPoly, h0: &FpPoly, p: u64, exp: u32) -> (ZPoly, ZPoly) {
    let (_sigma, tau) = fp_bezout(g0, h0, p);
    let from_fp = |v: &FpPoly| ZPoly::new(v.iter().map(|&c| BigInt::from(c)).collect());
    let mut g = from_fp(g0);
    let mut h = from_fp(h0);
    let pb = BigInt::from(p);
    let mut m = pb.clone();
    for _ in 1..exp {
        // f - g h = m * delta with delta taken mod p.
        let err = f.sub(&g.mul(&h));
        let delta_fp = fp_normalize(
            err.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(&m);
                    debug_assert!(r.is_zero(), "Hensel invariant broken");
                    q.mod_floor(&pb).to_u64().unwrap()
                })
                .collect(),
        );
        let u = fp_rem(&fp_mul(&tau, &delta_fp, p), g0, p);
        let num = fp_sub(&delta_fp, &fp_mul(&u, h0, p), p);
        let (w, rem) = fp_divrem(&num, g0, p);
        debug_assert!(rem.is_empty(), "Hensel correction not divisible");
        g = g.add_scaled(&u, &m);
        h = h.add_scaled(&w, &m);
        m *= p;
    }
    debug_assert!(f.sub(&g.mul(&h)).reduce_mod(&m).coeffs.is_empty());
    (g.reduce_mod(&m), h.reduce_mod(&m))
}

impl ZPoly {
    fn add_scaled(&self, v: &FpPoly, m: &BigInt) -> ZPoly {
        let n = self.coeffs.len().max(v.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = v.get(i).map(|&c| BigInt::from(c) * m).unwrap_or_else(BigInt::zero);
            coeffs.push(a + b);
        }
        ZPoly::new(coeffs)
    }
}

// ---------------------------------------------------------------------------
// Arithmetic over F_p (p < 2^31), polynomials as ascending u64 vectors

type FpPoly = Vec<u64>;

fn fp_normalize(mut v: FpPoly) -> FpPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}


fn fp_sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    fp_normalize(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0) % p) % p)
            .collect(),
    )
}

fn fp_mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_normalize(out)
}

fn fp_scale(a: &FpPoly, c: u64, p: u64) -> FpPoly {
    fp_normalize(a.iter().map(|&x| x * c % p).collect())
}

fn fp_inv_scalar(c: u64, p: u64) -> u64 {
    // Fermat; p is prime and c nonzero mod p.
    let mut base = c % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn fp_divrem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty());
    let d = b.len() - 1;
    let lc_inv = fp_inv_scalar(*b.last().unwrap(), p);
    let mut rem = a.clone();
    let mut quo = vec![0u64; a.len().saturating_sub(d)];
    while rem.len() > d {
        let k = rem.len() - 1 - d;
        let factor = rem.last().unwrap() * lc_inv % p;
        if factor != 0 {
            for (i, &bc) in b.iter().enumerate() {
                rem[k + i] = (rem[k + i] + p * p - factor * bc % p) % p;
            }
            quo[k] = factor;
        }
        rem.pop();
    }
    (fp_normalize(quo), fp_normalize(rem))
}

fn fp_rem(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    fp_divrem(a, b, p).1
}

fn fp_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        let inv = fp_inv_scalar(*a.last().unwrap(), p);
        fp_scale(&a, inv, p)
    }
}

fn fp_derivative(a: &FpPoly, p: u64) -> FpPoly {
    if a.len() <= 1 {
        return Vec::new();
    }
    fp_normalize(a.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % p) % p).collect())
}

fn fp_product(fs: &[FpPoly], p: u64) -> FpPoly {
    let mut acc = vec![1u64];
    for f in fs {
        acc = fp_mul(&acc, f, p);
    }
    acc
}

/// Bezout pair for coprime `g`, `h`: `sigma g + tau h = 1` mod `p`.
fn fp_bezout(g: &FpPoly, h: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    assert_eq!(r0.len(), 1, "Bezout needs coprime inputs");
    let inv = fp_inv_scalar(r0[0], p);
    (fp_scale(&s0, inv, p), fp_scale(&t0, inv, p))
}

/// `x^e mod f` over F_p.
fn fp_xpow_mod(e: u64, f: &FpPoly, p: u64) -> FpPoly {
    let mut result = vec![1u64];
    let mut base = fp_rem(&vec![0, 1], f, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = fp_rem(&fp_mul(&result, &base, p), f, p);
        }
        base = fp_rem(&fp_mul(&base, &base, p), f, p);
        e >>= 1;
    }
    result
}

/// Berlekamp factorization of a monic square-free polynomial over F_p.
fn berlekamp_factor(f: &FpPoly, p: u64) -> Vec<FpPoly> {
    let d = f.len() - 1;
    if d <= 1 {
        return vec![f.clone()];
    }
    // Frobenius matrix: column i holds x^{i p} mod f.
    let xp = fp_xpow_mod(p, f, p);
    let mut cols: Vec<FpPoly> = Vec::with_capacity(d);
    let mut acc = vec![1u64];
    for _ in 0..d {
        cols.push(acc.clone());
        acc = fp_rem(&fp_mul(&acc, &xp, p), f, p);
    }
    // Nullspace of (M - I) over F_p by column reduction of the row matrix.
    let mut rows = vec![vec![0u64; d]; d];
    for (i, col) in cols.iter().enumerate() {
        for j in 0..d {
            rows[j][i] = col.get(j).copied().unwrap_or(0);
        }
        rows[i][i] = (rows[i][i] + p - 1) % p;
    }
    let basis = fp_nullspace(rows, p);
    let r = basis.len();
    if r == 1 {
        return vec![f.clone()];
    }
    let mut factors = vec![f.clone()];
    for v in &basis {
        if factors.len() == r {
            break;
        }
        let vp = fp_normalize(v.clone());
        if vp.len() <= 1 {
            continue; // constant vector splits nothing
        }
        let mut next = Vec::new();
        for u in factors {
            if u.len() <= 2 {
                next.push(u);
                continue;
            }
            let mut pieces = Vec::new();
            let mut rest = u;
            for c in 0..p {
                if rest.len() <= 2 {
                    break;
                }
                let mut shifted = vp.clone();
                shifted[0] = (shifted[0] + p - c % p) % p;
                let g = fp_gcd(&rest, &fp_rem(&fp_normalize(shifted), &rest, p), p);
                if g.len() > 1 && g.len() < rest.len() {
                    let (q, _) = fp_divrem(&rest, &g, p);
                    pieces.push(g);
                    rest = q;
                }
            }
            if rest.len() > 1 {
                pieces.push(rest);
            }
            next.extend(pieces);
        }
        factors = next;
    }
    // The Berlekamp subalgebra basis separates every pair of irreducible
    // factors, so a full pass must reach the nullity.
    assert_eq!(factors.len(), r, "modular factorization did not fully split");
    factors
}

/// Nullspace basis of a square matrix over F_p (vectors as FpPoly coeffs).
fn fp_nullspace(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut pivot_col_of_row = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        let mut pv = None;
        for r in row..n {
            if m[r][col] % p != 0 {
                pv = Some(r);
                break;
            }
        }
        let Some(pv) = pv else { continue };
        m.swap(row, pv);
        let inv = fp_inv_scalar(m[row][col], p);
        for c in 0..n {
            m[row][c] = m[row][c] * inv % p;
        }
        for r in 0..n {
            if r != row && m[r][col] % p != 0 {
                let factor = m[r][col];
                for c in 0..n {
                    m[r][c] = (m[r][c] + p * p - factor * m[row][c] % p) % p;
                }
            }
        }
        pivot_col_of_row[row] = col;
        row += 1;
        if row == n {
            break;
        }
    }
    let pivots: std::collections::BTreeSet<usize> = pivot_col_of_row.iter().copied().filter(|&c| c != usize::MAX).collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            if pc != usize::MAX {
                v[pc] = (p - m[r][free] % p) % p;
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qr, Scalar};

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_ints(coeffs)
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[1, 2, 1]); // (x+1)^2
        let b = p(&[-1, 1]); // x - 1
        assert_eq!(a.mul(&b), p(&[-1, -1, 1, 1]));
        let (q, r) = a.divrem(&b);
        assert_eq!(q, p(&[3, 1]));
        assert_eq!(r, p(&[4]));
        assert_eq!(a.eval(&qi(2)), qi(9));
        assert_eq!(a.derivative(), p(&[2, 2]));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]).mul(&p(&[-2, 1])); // (x-1)(x-2)
        let b = p(&[-1, 1]).mul(&p(&[3, 1])); // (x-1)(x+3)
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert!(a.is_squarefree());
        let sq = p(&[-1, 1]).mul(&p(&[-1, 1]));
        assert!(!sq.is_squarefree());
    }

    #[test]
    fn inverse_mod_works() {
        let f = p(&[-2, 0, 1]); // x^2 - 2
        let a = p(&[0, 1]); // x
        let inv = a.inverse_mod(&f).unwrap();
        assert_eq!(a.mul(&inv).rem(&f), Poly::one());
        // Non-coprime case returns nothing.
        let g = p(&[0, 1]).mul(&p(&[-1, 1]));
        assert!(p(&[0, 1]).inverse_mod(&g).is_none());
    }

    #[test]
    fn newton_round_trip() {
        let roots = vec![qi(1), qi(2), qi(-3), qr(1, 2)];
        let f = poly_from_roots(&roots);
        let sums = power_sums_from_monic(&f, 9);
        for (k, s) in sums.iter().enumerate() {
            let direct: Q = roots.iter().map(|r| r.pow_u(k as u32)).fold(Q::zero(), |a, b| a + b);
            assert_eq!(*s, direct, "k={k}");
        }
        let rebuilt = monic_from_power_sums(&sums[1..=roots.len()]);
        assert_eq!(rebuilt, f);
    }

    #[test]
    fn squarefree_decomposition_splits_multiplicities() {
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
    }

    #[test]
    fn factor_rational_roots() {
        let f = p(&[-1, 1]).mul(&p(&[-2, 1])).mul(&p(&[5, 1]));
        let factors = factor(&f);
        assert_eq!(
            factors,
            vec![(p(&[-2, 1]), 1), (p(&[-1, 1]), 1), (p(&[5, 1]), 1)]
        );
    }

    #[test]
    fn factor_keeps_irreducibles_whole() {
        let f = p(&[-2, 0, 1]); // x^2 - 2
        assert_eq!(factor(&f), vec![(f.clone(), 1)]);
        let cyclo5 = p(&[1, 1, 1, 1, 1]);
        assert_eq!(factor(&cyclo5), vec![(cyclo5.clone(), 1)]);
    }

    #[test]
    fn factor_product_of_quadratics() {
        let a = p(&[-2, 0, 1]); // x^2 - 2
        let b = p(&[-3, 0, 1]); // x^2 - 3
        let c = p(&[1, 0, 1]); // x^2 + 1
        let f = a.mul(&b).mul(&c);
        let factors = factor(&f);
        assert_eq!(factors.len(), 3);
        let set: Vec<Poly> = factors.into_iter().map(|(g, _)| g).collect();
        assert!(set.contains(&a) && set.contains(&b) && set.contains(&c));
    }

    #[test]
    fn factor_non_monic_and_fractional() {
        // (x - 1/2)(x + 1/3), handed over in monic rational form.
        let f = Poly::linear(&qr(1, 2)).mul(&Poly::linear(&qr(-1, 3)));
        let factors = factor(&f);
        assert_eq!(
            factors,
            vec![(Poly::linear(&qr(1, 2)), 1), (Poly::linear(&qr(-1, 3)), 1)]
        );
    }

    #[test]
    fn factor_with_multiplicity() {
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[-2, 0, 1]));
        let factors = factor(&f);
        assert_eq!(factors, vec![(p(&[-1, 1]), 2), (p(&[-2, 0, 1]), 1)]);
    }

    #[test]
    fn factor_degree_eight_mixed() {
        // (x^2-2)(x^2+x+1)(x-4)(x+4)(x^2-x-1)
        let parts = [p(&[-2, 0, 1]), p(&[1, 1, 1]), p(&[-4, 1]), p(&[4, 1]), p(&[-1, -1, 1])];
        let mut f = Poly::one();
        for g in &parts {
            f = f.mul(g);
        }
        let factors = factor(&f);
        assert_eq!(factors.len(), parts.len());
        for g in &parts {
            assert!(factors.iter().any(|(h, m)| h == g && *m == 1), "missing {g:?}");
        }
    }

    #[test]
    fn factor_repeated_root_at_zero() {
        let f = p(&[0, 0, 1]); // x^2
        assert_eq!(factor(&f), vec![(p(&[0, 1]), 2)]);
    }
}
