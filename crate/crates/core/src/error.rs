use thiserror::Error;

use crate::rings::Elem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("malformed element: {0}")]
    MalformedElement(String),
    #[error("polynomial is not monic (leading coefficient is not a unit)")]
    NotMonic,
    #[error("polynomial is not separable (discriminant is not a unit)")]
    NotSeparable,
    #[error("enumeration cap exceeded: {size} > {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate form: Gram determinant is not a unit")]
    DegenerateForm,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram determinant of generators is not a unit")]
    GramNotUnit { det: Elem },
    #[error("element is not a unit")]
    NotUnit,
    #[error("vector is not unimodular")]
    NotUnimodular,
    #[error("vector is not isotropic")]
    NotIsotropic,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid descent datum: {0}")]
    InvalidDatum(String),
    #[error("space is anisotropic")]
    Anisotropic,
}

pub type Result<T> = std::result::Result<T, Error>;
