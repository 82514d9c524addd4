use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("operands live in different polynomial rings ({left} vs {right} variables)")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),

    #[error("monomial set is not connected to 0: {0}")]
    NotConnected(String),

    #[error("monomial {0} is not covered by the chosen sets")]
    CoveringFailure(String),

    #[error("method {method} does not apply to n={n}, d={d}: {reason}")]
    InapplicableMethod {
        method: String,
        n: usize,
        d: usize,
        reason: String,
    },

    #[error("no tabulated sets for n={n}, d={d}")]
    NotTabulated { n: usize, d: usize },

    #[error("symbolic computation capped at size {cap}, got {size}")]
    SymbolicCapExceeded { size: usize, cap: usize },

    #[error("operation requires an exact scalar type")]
    InexactScalar,

    #[error("affine map is singular")]
    SingularMap,

    #[error("unsupported construction family for this operation: {0}")]
    UnsupportedFamily(String),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("degree {degree} out of supported range: {reason}")]
    DegreeOutOfRange { degree: usize, reason: String },

    #[error("numerical rank decision was ambiguous at step {step} (gap ratio {ratio:.3e})")]
    RankAmbiguous { step: String, ratio: f64 },

    #[error("the pencil has no regular part")]
    NoRegularPart,

    #[error("reduced matrices do not commute (relative residual {0:.3e})")]
    NonCommuting(f64),

    #[error("system appears to have a positive-dimensional solution set")]
    PositiveDimensional,

    #[error("failed to parse input: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
