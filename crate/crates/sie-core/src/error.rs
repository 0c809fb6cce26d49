//! Error taxonomy shared by the whole crate. Every variant carries a stable
//! machine-readable code string that the CLI maps onto exit codes.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("declared jumps disagree with probed one-sided limits: {0}")]
    InconsistentJumpMetadata(String),

    #[error("degenerate knots: {0}")]
    DegenerateKnots(String),

    #[error("coefficient dimensions do not match the basis: {0}")]
    InvalidCoeffs(String),

    #[error("interpolation matrix is singular or numerically singular: {0}")]
    InterpolationSingular(String),

    #[error("evaluation point too close to a log-singular arc endpoint: {0}")]
    NearEndpointSingularity(String),

    #[error("invalid evaluation point: {0}")]
    InvalidPoint(String),

    #[error("non-finite value encountered during evaluation: {0}")]
    EvaluationFailure(String),

    #[error("principal-value oracle did not converge: {0}")]
    OracleUnconverged(String),

    #[error("symbol c-d (or c+d) vanishes on the contour: {0}")]
    SingularSymbol(String),

    #[error("winding number of the symbol is nonzero: {0}")]
    NonzeroWinding(String),

    #[error("collocation nodes collide after shifting: {0}")]
    NodeCollision(String),

    #[error("non-finite matrix entry at row {row}, column {col}")]
    AssemblyFailure { row: usize, col: usize },

    #[error("collocation system is ill-conditioned: {0}")]
    IllConditioned(String),
}

impl Error {
    /// Stable error-code string, part of the public interface.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InsufficientSamples(_) => "insufficient-samples",
            Error::InconsistentJumpMetadata(_) => "inconsistent-jump-metadata",
            Error::DegenerateKnots(_) => "degenerate-knots",
            Error::InvalidCoeffs(_) => "invalid-coeffs",
            Error::InterpolationSingular(_) => "interpolation-singular",
            Error::NearEndpointSingularity(_) => "near-endpoint-singularity",
            Error::InvalidPoint(_) => "invalid-point",
            Error::EvaluationFailure(_) => "evaluation-failure",
            Error::OracleUnconverged(_) => "oracle-unconverged",
            Error::SingularSymbol(_) => "singular-symbol",
            Error::NonzeroWinding(_) => "nonzero-winding",
            Error::NodeCollision(_) => "node-collision",
            Error::AssemblyFailure { .. } => "assembly-failure",
            Error::IllConditioned(_) => "ill-conditioned",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
