use thiserror::Error;

/// Errors raised while validating inputs or building constructions.
///
/// Every variant that reports a failed law carries the lexicographically
/// least violating tuple found by the scan.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table is malformed: {0}")]
    Malformed(String),

    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("element {a} has no inverse")]
    NotRegular { a: usize },

    #[error("idempotents {e} and {f} do not commute")]
    IdempotentsDontCommute { e: usize, f: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("{what}: size {size} exceeds the configured bound {bound}")]
    TooLarge {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("partition is not compatible: {a} ~ {a2} but {a}*{b} and {a2}*{b} (or {b}*{a} and {b}*{a2}) are separated")]
    NotCompatible { a: usize, a2: usize, b: usize },

    #[error("map is not multiplicative at ({a}, {b})")]
    NotMultiplicative { a: usize, b: usize },

    #[error("map is not injective: {a} and {b} have the same image")]
    NotInjective { a: usize, b: usize },

    #[error("map is not surjective: {missing} is not in the image")]
    NotSurjective { missing: usize },

    #[error("codomain is not a semilattice: {x} is not idempotent")]
    NotSemilatticeCodomain { x: usize },

    #[error("t={t} does not act by an endomorphism at ({a}, {b})")]
    NotEndomorphism { t: usize, a: usize, b: usize },

    #[error("action is not a homomorphism into End(K) at t={t}, u={u}, a={a}")]
    NotActionHom { t: usize, u: usize, a: usize },

    #[error("action and epsilon violate (AFR) at a={a}, e={e}")]
    AfrViolated { a: usize, e: usize },

    #[error("bitranslation does not respect the congruence at ({s}, {s2})")]
    DoesNotRespect { s: usize, s2: usize },

    #[error("transversal is not a homomorphism at classes ({t}, {u})")]
    NotSplit { t: usize, u: usize },

    #[error("transversal is invalid: {0}")]
    TransversalInvalid(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
