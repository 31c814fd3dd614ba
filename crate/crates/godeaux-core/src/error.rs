use thiserror::Error;

/// Error type shared by the whole pipeline.
#[derive(Debug, Error)]
pub enum GodeauxError {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("enumeration of an empty solution set")]
    EmptySolutionSet,

    #[error("solution is not representable as affine forms in the parameters: {0}")]
    NotAffine(String),

    #[error("unsupported torsion order {0} (expected 3, 4 or 5)")]
    UnsupportedTorsion(u32),

    #[error("case mismatch between elements of different torsion cases")]
    CaseMismatch,

    #[error("element does not belong to the group")]
    NotInGroup,

    #[error("the torsion group is not contained in the given group")]
    TorsionNotContained,

    #[error("inconsistent ratio conditions in stratum construction")]
    InconsistentRatios,

    #[error("relation multiplier is inconsistent across constant monomials: {0}")]
    MultiplierInconsistent(String),

    #[error("no catalog entry matches the group fingerprint (order {0})")]
    NoMatch(usize),

    #[error("ambiguous catalog match for group of order {0}")]
    AmbiguousMatch(usize),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GodeauxError>;
