use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("modulus must be monic of degree {expected}")]
    InvalidModulus { expected: u32 },
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("field order {0} exceeds the supported maximum")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to this field")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix is not symmetric")]
    AsymmetricGram,
    #[error("quadratic form is degenerate")]
    DegenerateForm,
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(usize),
    #[error("eigenvalue for m = {m} has imaginary residual {residual:e}")]
    NonRealEigenvalue { m: usize, residual: f64 },
    #[error("problem size {size} exceeds cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("pattern uses color 0")]
    ColorZero,
    #[error("invalid pattern: {0}")]
    InvalidPattern(&'static str),
    #[error("pattern has {0} vertices; automorphism search supports at most 10")]
    PatternTooLarge(usize),
    #[error("value table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
