use thiserror::Error;

/// Errors raised by the library. Every variant signals either malformed
/// input or a failed internal cross-check; none are recoverable by retrying
/// the same call.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("element index {index} out of range for a group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("symmetric group S_{0} is not built in (supported: 1 <= n <= 5)")]
    UnsupportedSymmetric(usize),

    #[error("commuting tuples are only enumerated for k in {{2, 3}}, got {0}")]
    UnsupportedArity(usize),

    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("invalid natural transformation: {0}")]
    InvalidTransformation(String),

    #[error("invalid retraction data: {0}")]
    InvalidRetraction(String),

    #[error("cochain is not a cocycle; coboundary is nontrivial on {0:?}")]
    NotCocycle(Vec<usize>),

    #[error("cochain is not normalized; nontrivial on {0:?}")]
    NotNormalized(Vec<usize>),

    #[error("expected a cochain of degree {expected}, found degree {found}")]
    Degree { expected: String, found: usize },

    #[error("cochain lives on a different groupoid than required")]
    BaseMismatch,

    #[error("0-cochain is not locally constant (differs across morphism {0})")]
    NotLocallyConstant(usize),

    #[error("value is not a rational integer: {0}")]
    NotInteger(String),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("representation invariant violated: {0}")]
    RepInvariant(String),

    #[error("twisted character fails the section property (residual {0:e})")]
    SectionProperty(f64),

    #[error("decomposition did not converge after {0} seeded attempts")]
    RetryExhausted(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
