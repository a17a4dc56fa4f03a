use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("cannot parse scalar {text:?}: {reason}")]
    Scalar { text: String, reason: String },

    #[error("involution not idempotent")]
    InvolutionNotIdempotent,

    #[error("symmetry relation violated")]
    SymmetryViolated,

    #[error("matrix is singular")]
    Singular,

    #[error("subspace is not contained in the ambient subspace")]
    NotContained,

    #[error("subspace is not totally isotropic")]
    NotTotallyIsotropic,

    #[error("isotropy class of the zero subspace is undefined")]
    ZeroSubspace,

    #[error("invalid one-parameter subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("enumeration bound exceeded: {what} (bound {bound})")]
    BoundExceeded { what: String, bound: usize },

    #[error("operation requires a finite prime field")]
    NotFinite,

    #[error("module is unstable")]
    Unstable,

    #[error("verdict unavailable: {0}")]
    VerdictUnavailable(String),

    #[error("incompatible modules: {0}")]
    Incompatible(String),

    #[error("matrix is not alternating")]
    NotAlternating,

    #[error("matrix has odd size")]
    OddSize,

    #[error("pfaffian is not a unit sign: {0}")]
    NotUnitPfaffian(String),

    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// A computed certificate failed its own verification.
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
