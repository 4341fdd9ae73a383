use thiserror::Error;

use crate::quiver::Certificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameters lie in the forbidden locus: {0}")]
    ParamsInForbiddenLocus(String),
    #[error("dimension mismatch in degree {degree}: expected {expected}, computed {computed}")]
    DimensionMismatch {
        degree: usize,
        expected: usize,
        computed: usize,
    },
    #[error("no nonzero central element in degree 3")]
    NoCentralCubic,
    #[error("degree-3 center has dimension {0}, expected 1")]
    CenterTooBig(usize),
    #[error("zero element where a nonzero one is required")]
    ZeroElement,
    #[error("relation determinant vanishes identically (linear case)")]
    LinearCase,
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("kernel at {point} has dimension {dim}, expected 1")]
    DegenerateKernel { point: String, dim: usize },
    #[error("operation needs a finite field")]
    FieldNotFinite,
    #[error("characteristic polynomial has nonzero coefficients past the degree bound")]
    InsufficientDegrees,
    #[error("class has rank {0}, expected 1")]
    RankNotOne(i64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("Euler characteristic mismatch: complex gives {complex}, Euler form gives {form}")]
    EulerMismatch { complex: i64, form: i64 },
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("f is not surjective: {0}")]
    NotSurjective(String),
    #[error("degree budget too small: need max_deg >= {needed}, have {have}")]
    DegreeBudget { needed: usize, have: usize },
    #[error("membership certificate failed")]
    CertificateFailed(Box<Certificate>),
    #[error("determinant form vanishes identically")]
    IdenticallyZero,
    #[error("invariant-0 rank-one classes are exactly the shifts of the structure sheaf")]
    InvariantZero,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for broken internal identities, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionMismatch { .. }
            | Error::NoCentralCubic
            | Error::CenterTooBig(_)
            | Error::EulerMismatch { .. }
            | Error::Internal(_)
            | Error::LinearCase
            | Error::DegenerateKernel { .. } => 1,
            _ => 2,
        }
    }
}
