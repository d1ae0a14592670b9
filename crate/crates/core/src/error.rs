use thiserror::Error;

/// Errors raised by the exact-computation layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NonSquare { rows: usize, row: usize, len: usize },

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("integer root search exceeds its budget (bound {bound})")]
    RootSearchBudget { bound: String },

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("the generator family is not an ideal of the Boolean algebra: {0}")]
    NotBooleanIdeal(String),

    #[error("ring factors are not all the same field")]
    MixedFactorFields,

    #[error("word mismatch: expected {expected}, found {found}")]
    WordMismatch { expected: String, found: String },

    #[error("scalar variants differ: {0} vs {1}")]
    MixedScalars(String, String),

    #[error("morphism is not an endomorphism ({source_word} -> {target_word})")]
    NotEndomorphism { source_word: String, target_word: String },

    #[error("evaluation parameter mismatch: morphism specialised at {param}, functor has p - q = {expected}")]
    ParamMismatch { param: String, expected: i64 },

    #[error("evaluation budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u128 },

    #[error("morphism is not idempotent")]
    NotIdempotent,

    #[error("length mismatch: need {needed}, got {got}")]
    LengthMismatch { needed: usize, got: usize },

    #[error("too many ring factors: {0} (limit 20)")]
    TooManyFactors(usize),

    #[error("ideal is not prime: {0}")]
    NotPrime(String),

    #[error("inclusion is not injective at factor {0}")]
    NotInjective(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("map rule is not total: {0}")]
    NotTotal(String),

    #[error("subset descriptor does not fit the space: {0}")]
    BadDescriptor(String),

    #[error("object {0} lies outside the probe window")]
    OutsideWindow(String),

    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("generic Gram matrix is singular; kernel over Q(t) is not supported")]
    SingularGenericGram,
}

pub type Result<T> = std::result::Result<T, Error>;
