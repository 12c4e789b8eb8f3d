use thiserror::Error;

/// Errors raised by operations on finite-dimensional algebras and their maps.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid block dimensions {0:?}: every block must have size at least 1")]
    InvalidDims(Vec<i64>),
    #[error("algebra mismatch: expected dims {expected:?}, found {found:?}")]
    AlgebraMismatch { expected: Vec<usize>, found: Vec<usize> },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("element is not self-adjoint")]
    NotSelfAdjoint,
    #[error("element is not positive")]
    NotPositive,
    #[error("element is not an effect")]
    NotEffect,
    #[error("element is not a projection")]
    NotProjection,
    #[error("element is not normal")]
    NotNormal,
    #[error("function is undefined at eigenvalue {re}{im:+}i")]
    FunctionUndefined { re: f64, im: f64 },
    #[error("division undefined: residual {residual:e} exceeds tolerance")]
    DivisionUndefined { residual: f64 },
    #[error("sequential quotient undefined: residual {residual:e} exceeds tolerance")]
    QuotientUndefined { residual: f64 },
    #[error("map is not bounded by the filter: f(1) is not below d*d")]
    FilterBoundViolated,
    #[error("map does not vanish on the complement: |f(e^perp)| = {0:e}")]
    CarrierViolated(f64),
    #[error("map is not positive")]
    MapNotPositive,
    #[error("map codomain is not the scalars")]
    NotAFunctional,
    #[error("map domain and codomain differ")]
    NotAnEndomorphism,
    #[error("subspace is not a unital *-subalgebra: {0}")]
    ClosureViolated(String),
    #[error("subalgebra is not commutative")]
    NotCommutative,
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidDims(_) => "InvalidDims",
            Error::AlgebraMismatch { .. } => "AlgebraMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotSelfAdjoint => "NotSelfAdjoint",
            Error::NotPositive => "NotPositive",
            Error::NotEffect => "NotEffect",
            Error::NotProjection => "NotProjection",
            Error::NotNormal => "NotNormal",
            Error::FunctionUndefined { .. } => "FunctionUndefined",
            Error::DivisionUndefined { .. } => "DivisionUndefined",
            Error::QuotientUndefined { .. } => "QuotientUndefined",
            Error::FilterBoundViolated => "FilterBoundViolated",
            Error::CarrierViolated(_) => "CarrierViolated",
            Error::MapNotPositive => "MapNotPositive",
            Error::NotAFunctional => "NotAFunctional",
            Error::NotAnEndomorphism => "NotAnEndomorphism",
            Error::ClosureViolated(_) => "ClosureViolated",
            Error::NotCommutative => "NotCommutative",
            Error::DecompositionFailed(_) => "DecompositionFailed",
            Error::InvalidTolerance(_) => "InvalidTolerance",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
