//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by exact computations in this crate.
///
/// Domain errors (value-group mismatches, zero inputs, precision
/// exhaustion) are kept separate from oracle capability gaps so that
/// callers can distinguish "this is mathematically wrong" from "this
/// instance cannot decide it".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("incompatible instances: {0}")]
    IncompatibleInstances(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero input: {0}")]
    ZeroInput(String),

    #[error("group automorphism must be lower-triangular with positive diagonal")]
    BadAutomorphism,

    #[error("indeterminate at current precision: {0}")]
    IndeterminatePrecision(String),

    #[error("series has unbounded exact inverse; truncate to a finite precision first")]
    UnboundedInverse,

    #[error("residue map undefined: {0}")]
    ResidueUndefined(String),

    #[error("coefficient of negative value in residue reduction")]
    NegativeCoefficientValue,

    #[error("axiom 1 unsupported: {0}")]
    Axiom1Unsupported(String),

    #[error("axiom 1 search exhausted after {0} candidates")]
    Axiom1SearchExhausted(usize),

    #[error("linear difference oracle unsupported: {0}")]
    OracleUnsupported(String),

    #[error("root finding unsupported: {0}")]
    ResidueRootUnsupported(String),

    #[error("constant polynomial where a nonconstant one is required")]
    ConstantPolynomial,

    #[error("not a tropical zero of the polynomial")]
    NotTropicalZero,

    #[error("pc-trace too short: need at least {need} entries, got {got}")]
    TraceTooShort { need: usize, got: usize },

    #[error("pc-trace is not pseudo-convergent: {0}")]
    BadTrace(String),

    #[error("precision insufficient to certify: {0}")]
    PrecisionInsufficient(String),

    #[error("integration would need a logarithm (exponent -1 term)")]
    LogarithmNeeded,

    #[error("operand is not flat (monomial carries a nonzero exponential part)")]
    EpartNonzero,

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line: 1, col, msg: msg.into() }
    }

    /// Machine-readable error kind for the CLI's JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(..) => "dimension-mismatch",
            Error::IncompatibleInstances(..) => "incompatible-instances",
            Error::DivisionByZero => "division-by-zero",
            Error::ZeroInput(..) => "zero-input",
            Error::BadAutomorphism => "bad-automorphism",
            Error::IndeterminatePrecision(..) => "indeterminate-at-precision",
            Error::UnboundedInverse => "unbounded-inverse",
            Error::ResidueUndefined(..) => "residue-undefined",
            Error::NegativeCoefficientValue => "negative-coefficient-value",
            Error::Axiom1Unsupported(..) => "axiom-1-unsupported",
            Error::Axiom1SearchExhausted(..) => "axiom-1-search-exhausted",
            Error::OracleUnsupported(..) => "oracle-unsupported",
            Error::ResidueRootUnsupported(..) => "residue-root-unsupported",
            Error::ConstantPolynomial => "constant-polynomial",
            Error::NotTropicalZero => "not-tropical-zero",
            Error::TraceTooShort { .. } => "trace-too-short",
            Error::BadTrace(..) => "bad-trace",
            Error::PrecisionInsufficient(..) => "precision-insufficient",
            Error::LogarithmNeeded => "logarithm-needed",
            Error::EpartNonzero => "epart-nonzero",
            Error::Parse { .. } => "parse-error",
            Error::Invalid(..) => "invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
