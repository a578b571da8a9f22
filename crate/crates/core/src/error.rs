use thiserror::Error;

use crate::group::BackendKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("backend mismatch: expected {expected} element, got {found}")]
    BackendMismatch {
        expected: BackendKind,
        found: BackendKind,
    },

    #[error("element {element} is not valid for this group: {reason}")]
    InvalidElement { element: String, reason: String },

    #[error("no k <= {cap} with g^k = e (cap too small, or element of infinite order)")]
    OrderBudgetExceeded { cap: u64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("not a group: {axiom} fails at {witness}")]
    NotAGroup { axiom: String, witness: String },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("support is not closed under multiplication: {left} * {right} = {product} escapes it")]
    NotClosed {
        left: String,
        right: String,
        product: String,
    },

    #[error("identity element is missing from the support")]
    IdentityMissing,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("measure is not a generalized inverse: mu * nu * mu != mu")]
    NotAGInverse,

    #[error("Moore-Penrose verification failed: {0}")]
    MpVerificationFailed(String),

    #[error("certificate validation failed: {0}")]
    CertificateInvalid(String),

    #[error("group has more than {cap} elements")]
    CapExceeded { cap: usize },

    #[error("generated subgroup has more than {cap} elements")]
    ClosureBudgetExceeded { cap: usize },

    #[error("oracle budget exceeded: {0}")]
    UniverseTooLarge(String),
}
