use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("pole at infinity of order {0}")]
    PoleAtInfinity(u32),
    #[error("coefficient payload mismatch: {0}")]
    PayloadMismatch(String),
    #[error("series precondition violated: {0}")]
    Series(String),
    #[error("non-triangular substitution: substituted series has a nonzero constant term")]
    NonTriangular,
    #[error("invalid toric input: {0}")]
    InvalidInput(String),
    #[error("chamber point on a wall: {0}")]
    ChamberOnWall(String),
    #[error("empty momentum polyhedron")]
    EmptyPolyhedron,
    #[error("non-compact momentum polyhedron: {0}")]
    NonCompact(String),
    #[error("non-simplicial or non-compact edge structure: {0}")]
    EdgeStructure(String),
    #[error("truncation class not ample: {0}")]
    NotAmple(String),
    #[error("degree {0} is not in the degree semigroup")]
    NotInSemigroup(String),
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),
    #[error("non-polynomial integral: {0}")]
    NonPolynomialIntegral(String),
    #[error("cannot specialize uncertified sum")]
    Uncertified,
    #[error("bundle not non-negative: {0}")]
    BundleNegative(String),
    #[error("vanishing denominator: {0}")]
    VanishingDenominator(String),
    #[error("asymptotics outside the expected form: {0}")]
    AsymptoticsForm(String),
    #[error("normalization failed: {0}")]
    NormalizationFailed(String),
    #[error("operator undefined for this degree: {0}")]
    OperatorUndefined(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("configuration error at {path}: {message}")]
    Config { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
