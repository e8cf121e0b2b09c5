use thiserror::Error;

use crate::document::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("degree {degree} exceeds the degree cap {cap}")]
    CapOverflow { degree: usize, cap: usize },

    #[error("degree {degree} is outside the trusted range (at most {trusted})")]
    Untrusted { degree: usize, trusted: usize },

    #[error("invalid generator declaration: {0}")]
    InvalidGenerator(String),

    #[error("differential of `{generator}` must have degree {expected}, found a term of degree {found}")]
    IllGradedDifferential {
        generator: String,
        expected: usize,
        found: usize,
    },

    #[error("d(d({generator})) = {residue} is not zero")]
    DifferentialSquareNonzero { generator: String, residue: String },

    #[error("algebra validation failed: {0}")]
    InvalidAlgebra(String),

    #[error("morphism validation failed: {0}")]
    InvalidMorphism(String),

    #[error("element of degree {degree} is not a cocycle")]
    NotACocycle { degree: usize },

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("Massey product is not defined: {}", undefined_reason(*.left, *.right))]
    MasseyUndefined { left: bool, right: bool },

    #[error("zero-test and ideal-test verdicts disagree; this is an internal inconsistency")]
    VerdictDisagreement,

    #[error("scaling class must have even degree to be central, found degree {0}")]
    NotCentral(usize),

    #[error("line bundle {index}: {reason}")]
    InvalidBundle { index: usize, reason: String },

    #[error("premise violated: {0}")]
    PremiseViolated(String),

    #[error("degree cap {given} is too small, at least {required} is required")]
    CapTooSmall { required: usize, given: usize },

    #[error("transfer datum is invalid: {0}")]
    DatumInvalid(String),

    #[error("transfer datum does not match the fixed model: {0}")]
    DatumMismatch(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("budget of {budget} Massey evaluations exhausted after {configurations_done} of {configurations_total} configurations")]
    BudgetExhausted {
        budget: usize,
        configurations_done: usize,
        configurations_total: usize,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn undefined_reason(left: bool, right: bool) -> &'static str {
    match (left, right) {
        (true, true) => "[a][b] != 0 and [b][c] != 0",
        (true, false) => "[a][b] != 0",
        (false, true) => "[b][c] != 0",
        (false, false) => "no obstruction recorded",
    }
}
