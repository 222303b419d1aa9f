use alloc::string::String;

/// Errors raised by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("map is not surjective")]
    NotSurjective,
    #[error("map is not a rigid surjection")]
    NotRigid,
    #[error("chain size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("table entry {value} at position {position} is out of range for codomain of size {bound}")]
    OutOfRange {
        position: usize,
        value: usize,
        bound: usize,
    },
    #[error("invalid chain labels: {0}")]
    InvalidLabels(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("signature mismatch")]
    SignatureMismatch,
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("variable x{0} is not bound by the assignment")]
    UnboundVariable(usize),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("map is not a homomorphism")]
    NotHomomorphism,
    #[error("variety has no generators")]
    EmptyVariety,
    #[error("variety is trivial")]
    TrivialVariety,
    #[error("algebra does not lie in the variety")]
    NotInVariety,
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("neat enumeration did not cover the carrier by shape length {0}")]
    CoverNotFound(usize),
    #[error("unknown category tag `{0}`")]
    UnknownCategory(String),
    #[error("object does not belong to category {0}")]
    WrongObject(&'static str),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("missing expansion for order {0}")]
    MissingExpansion(String),
    #[error("no connecting morphism")]
    NoConnectingMorphism,
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
