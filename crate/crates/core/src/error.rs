use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor {0} is not a single pi-monomial")]
    NonMonomialDivisor(String),
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
    #[error("coordinate systems differ: {0:?} vs {1:?}")]
    CoordsMismatch(crate::poly::Coords, crate::poly::Coords),
    #[error("operation needs (t,u) coordinates")]
    NeedsTuCoords,
    #[error("degree {k} out of range 0..={max}")]
    DegreeOutOfRange { k: i64, max: i64 },
    #[error("invalid index {0}")]
    InvalidIndex(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("expected a homogeneous valuation of top degree {expected}")]
    NotTopDegree { expected: u32 },
    #[error("the second argument must be a polynomial in u alone: {0}")]
    MalformedUPoly(String),
    #[error("radial contraction is undefined on {0}")]
    ContractionDomain(&'static str),
    #[error("oracle expansion left a nonzero residual: {0}")]
    OracleResidual(String),
    #[error("expected a one-dimensional solution space in degree {k}, found dimension {dim}")]
    NotOneDimensional { k: u32, dim: usize },
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("unknown check name {0:?}")]
    UnknownCheck(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
