use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("unsupported characteristic: p = {p} but dim = {dim}; need p > dim")]
    SmallCharacteristic { p: u64, dim: usize },
    #[error("non-split semisimple quotient: {0}")]
    NonSplit(String),
    #[error("associativity fails at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit law fails at basis element {0}")]
    UnitLaw(usize),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("not a submodule: {0}")]
    NotSubmodule(String),
    #[error("module has a projective direct summand")]
    ProjectiveSummand,
    #[error("not a generator: the regular module is not a direct summand")]
    NotGenerator,
    #[error("empty direct sum")]
    EmptySum,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis scan failed: {0}")]
    ScanFailed(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
