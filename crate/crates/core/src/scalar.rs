//! Scalar ground types: exact rationals and tolerance-carrying complex floats.
//!
//! The exact path works over arbitrary-precision rationals ([`Q`]) and never
//! rounds. The float path works over [`Complex64`] values compared through an
//! explicit [`Tol`] context; the tolerance is always a parameter, never a
//! global.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Exact rational scalar, always kept in reduced form with positive denominator.
pub type Q = num_rational::BigRational;

/// `n` as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational (`d != 0`).
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `"p/q"`, or just `"p"` when the denominator is one.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal: {}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"p"` or `"p/q"` with optional sign, rejecting zero denominators.
pub fn parse_rational(s: &str) -> Result<Q, ParseRationalError> {
    let bad = || ParseRationalError(s.to_string());
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Q::from_integer(numer)),
        Some(d) => {
            let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
            if denom.is_zero() {
                Err(bad())
            } else {
                Ok(Q::new(numer, denom))
            }
        }
    }
}

/// Nearest-double value of an exact rational.
pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of leading digits for out-of-range big ints.
        let n = x.numer().to_f64().unwrap_or(f64::MAX);
        let d = x.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Comparison context for the float path. Equality of approximate scalars
/// means agreement within `eps` in the max norm over real and imaginary
/// parts; residual acceptance in longer pipelines additionally scales by the
/// magnitude of the quantities compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub eps: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { eps: 1e-9 }
    }
}

impl Tol {
    pub fn new(eps: f64) -> Self {
        assert!(eps > 0.0, "tolerance must be positive");
        Tol { eps }
    }

    /// Absolute equality in the max norm.
    pub fn eq(&self, a: Complex64, b: Complex64) -> bool {
        (a.re - b.re).abs() <= self.eps && (a.im - b.im).abs() <= self.eps
    }

    /// Equality scaled by the magnitude of the operands; used when comparing
    /// quantities that grow with the truncation order.
    pub fn eq_scaled(&self, a: Complex64, b: Complex64) -> bool {
        let scale = 1f64.max(a.norm()).max(b.norm());
        (a - b).norm() <= self.eps * scale
    }

    pub fn is_zero(&self, a: Complex64) -> bool {
        self.eq(a, Complex64::new(0.0, 0.0))
    }
}

/// Field operations shared by the exact and the float path. Implementations
/// must be exact for rationals; `is_zero` (from [`Zero`]) is structural: the
/// float implementation compares to literal zero, tolerance-aware tests live
/// in [`Tol`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + Zero + One {
    fn from_int(n: i64) -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// Exact division; `rhs` must be nonzero.
    fn div_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

impl Scalar for Q {
    fn from_int(n: i64) -> Self {
        qi(n)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Scalar for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

/// Sum of `k`-th powers of a list of scalars (`k = 0` counts the list).
pub fn power_sum<S: Scalar>(xs: &[S], k: u32) -> S {
    let mut acc = S::zero();
    for x in xs {
        acc = acc.add_ref(&x.pow_u(k));
    }
    acc
}

/// Binomial coefficient as a scalar; `n` stays small in every caller.
pub fn binom<S: Scalar>(n: u32, k: u32) -> S {
    if k > n {
        return S::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k.min(n - k) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    let v = num / den;
    // Values fit in i64 for every order this crate handles.
    S::from_int(v.to_i64().expect("binomial overflow"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for (s, canon) in [("3/4", "3/4"), ("-6/8", "-3/4"), ("5", "5"), ("10/2", "5"), ("0/7", "0")] {
            let q = parse_rational(s).unwrap();
            assert_eq!(format_rational(&q), canon);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binom::<Q>(4, 2), qi(6));
        assert_eq!(binom::<Q>(5, 0), qi(1));
        assert_eq!(binom::<Q>(3, 7), qi(0));
        assert_eq!(binom::<Q>(20, 10), qi(184_756));
    }

    #[test]
    fn tolerance_is_contextual() {
        let tight = Tol::new(1e-12);
        let loose = Tol::new(1e-3);
        let a = Complex64::new(1.0, 0.0);
        let b = Complex64::new(1.0 + 1e-6, 0.0);
        assert!(!tight.eq(a, b));
        assert!(loose.eq(a, b));
    }
}
