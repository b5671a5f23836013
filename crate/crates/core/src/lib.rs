//! Exact machinery for recognizing signed integer exponential sums in
//! truncated central-character data of `gl_n`, and for certifying the answer.
//!
//! The pipeline has three legs:
//!
//! * **Recognition** ([`expsum`]): given the first `K` values of a difference
//!   of central characters, decide whether it matches
//!   `sum_i exp(b_i u) - sum_j exp(c_j u)` for some node multisets `B`, `C`
//!   with at most `L` distinct nodes, and if so return the witness. The
//!   reduction runs through exponential-generating-function division
//!   ([`series`]), a minimal linear recurrence, and exact factorization of
//!   the recurrence polynomial ([`poly`]).
//! * **Construction** ([`interpolate`]): given a witness and a target
//!   character, complete power sums via Newton's identities and emit, for
//!   every rank `n` in a range, a pair of weights whose characters realize
//!   the difference exactly.
//! * **Verification** ([`enveloping`]): a brute-force oracle inside
//!   `U(gl_n)` (PBW straightening, truncated Verma modules, the explicit
//!   quadratic Casimir and the split Casimir on `M ⊗ V` and `M ⊗ V*`) that
//!   checks the eigenvalue identities everything else relies on.
//!
//! All exact arithmetic is over arbitrary-precision rationals; an optional
//! floating-point path ([`approx`]) handles non-rational node data with an
//! explicit tolerance context.

pub mod approx;
pub mod charcenter;
pub mod enveloping;
pub mod expsum;
pub mod interpolate;
pub mod job;
pub mod jsonio;
pub mod linalg;
pub mod poly;
pub mod sampling;
pub mod scalar;
pub mod series;

pub use charcenter::{character_difference, character_from_weight, lemma9_difference, CentralCharacter, Weight};
pub use expsum::{decide_nonvanishing, Decision, DecisionStatus, Witness};
pub use interpolate::{build_weight_family, powersum_complete, verify_weight_family, WeightFamily};

pub use scalar::Q;
pub use series::{divide_by_expm1, moments_from_witness, pbar_eval, pk_eval, MomentKind, MomentSequence, TaylorSeq};
pub use scalar::binom;
