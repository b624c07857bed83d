use thiserror::Error;

/// Errors raised by every layer of the library.
///
/// Each variant has a stable machine-readable [`Error::code`] used by the CLI's
/// JSON error objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("underlying graph is not a disjoint union of ADE diagrams: {0}")]
    NotDynkin(String),
    #[error("quiver has an oriented cycle through vertex {0}")]
    OrientedCycle(String),
    #[error("arguments belong to different quivers: {0}")]
    MismatchedQuiver(String),
    #[error("not a positive root of this quiver: {0}")]
    UnknownRoot(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("unsupported field F_{0}; supported primes are 2, 3, 5, 7, 11, 13")]
    UnsupportedField(u32),
    #[error("not a partition of the positive roots: {0}")]
    NotAPartition(String),
    #[error("enumeration limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("interpolation mismatch: {0}")]
    InterpolationMismatch(String),
    #[error("invalid stratum path: {0}")]
    InvalidPath(String),
    #[error("quiver is not special: {0}")]
    NotSpecial(String),
    #[error("special-quiver criteria disagree: {0}")]
    CriteriaDisagree(String),
    #[error("base change matrix is not invertible: {0}")]
    SingularBaseChange(String),
    #[error("no bar-invariant element in the lattice: {0}")]
    LatticeFailure(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse_error",
            Error::NotDynkin(_) => "not_dynkin",
            Error::OrientedCycle(_) => "oriented_cycle",
            Error::MismatchedQuiver(_) => "mismatched_quiver",
            Error::UnknownRoot(_) => "unknown_root",
            Error::InternalInconsistency(_) => "internal_inconsistency",
            Error::UnsupportedField(_) => "unsupported_field",
            Error::NotAPartition(_) => "not_a_partition",
            Error::LimitExceeded(_) => "limit_exceeded",
            Error::WeightMismatch(_) => "weight_mismatch",
            Error::InterpolationMismatch(_) => "interpolation_mismatch",
            Error::InvalidPath(_) => "invalid_path",
            Error::NotSpecial(_) => "not_special",
            Error::CriteriaDisagree(_) => "criteria_disagree",
            Error::SingularBaseChange(_) => "singular_base_change",
            Error::LatticeFailure(_) => "lattice_failure",
            Error::Usage(_) => "usage_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
