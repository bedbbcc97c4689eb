//! Error type shared by the whole crate.
//!
//! Usage errors (dimension mismatches, violated preconditions that only a
//! programming mistake can trigger) panic with an explanatory message instead
//! of appearing here; the variants below are the data-dependent rejections a
//! caller is expected to handle.

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// gcd(c, d, N) > 1, so (c : d) is not a point of P^1(Z/N).
    #[error("({c} : {d}) is not a valid symbol modulo {level}: gcd with the level exceeds 1")]
    InvalidSymbol { c: u64, d: u64, level: u64 },

    /// Requested q-expansion precision is below the Sturm bound of the level.
    #[error("precision {precision} is below the Sturm bound {sturm_bound} of level {level}")]
    PrecisionTooSmall {
        level: u64,
        precision: usize,
        sturm_bound: usize,
    },

    /// S2(Gamma0(N)) = 0, so no newform of this level exists.
    #[error("level {level} has genus 0: S2(Gamma0({level})) contains no newforms")]
    DegenerateLevel { level: u64 },

    /// The coefficient vector lies in the rational span of the old subspace,
    /// so it does not come from a newform of this level.
    #[error("coefficient vector lies in the rational old subspace: not a newform of level {level}")]
    NotANewform { level: u64 },

    /// An operation needed optional curve data that the record does not carry.
    #[error("curve record is missing required data: {0}")]
    MissingData(String),

    /// The a-invariants describe a singular cubic (discriminant zero).
    #[error("a-invariants define a singular curve (discriminant is zero)")]
    SingularCurve,

    /// Bad-prime point counting produced a trace outside {-1, 0, 1}; the
    /// supplied model cannot be minimal at that prime.
    #[error("reduction at {p} gives trace {got}, outside {{-1,0,1}}: model is not minimal at {p}")]
    NonMinimalModel { p: u64, got: i64 },

    /// An integer that had to be factored resisted trial division and is not
    /// prime; desk-scale inputs never get here.
    #[error("cannot factor {0}: composite cofactor beyond trial-division range")]
    FactorizationIncomplete(BigUint),

    /// The two candidate routes disagreed on the final list of congruence
    /// primes.  This is always a bug or corrupt input data, never a valid
    /// mathematical outcome.
    #[error("candidate routes disagree at level {level}: modular-degree route {theorem3:?}, saturation route {smith:?}")]
    RouteDisagreement {
        level: u64,
        theorem3: Vec<BigUint>,
        smith: Vec<BigUint>,
    },

    /// Malformed input document (CLI layer attaches file/position context).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
