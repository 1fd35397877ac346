use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Domain errors. Each variant names the invariant or precondition that failed.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension must be at least 2 (got {0})")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ket is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max |M - M^dag| = {0})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0})")]
    NotPositive(f64),

    #[error("vectors are not orthonormal (max Gram deviation {0})")]
    NotOrthonormal(f64),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid axes: {0}")]
    InvalidAxes(String),

    #[error("at least {min} bases are required (got {found})")]
    TooFewBases { min: usize, found: usize },

    #[error("marginals of interior axis {0} are not outcome probabilities")]
    InteriorAxis(usize),

    #[error("a conditioned distribution does not represent a state")]
    Conditioned,

    #[error("distribution carries no {0}")]
    MissingProvenance(&'static str),

    #[error("postselection probability {0} is too small to condition on")]
    VanishingPostselection(f64),

    #[error("postselection probability disagrees: quasiprobability sum {sum}, trace {trace}")]
    InconsistentPostselection { sum: f64, trace: f64 },

    #[error("invalid postselection outcome: {0}")]
    InvalidOutcome(String),

    #[error("overlap magnitude {0} is too close to 0 or 1 for a nondegenerate witness")]
    DegenerateOverlap(f64),

    #[error("target {target} outside achievable interval [{low}, {high}]")]
    TargetOutOfRange { target: f64, low: f64, high: f64 },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid mixture weights: {0}")]
    InvalidWeights(String),

    #[error("corollary hypotheses unmet: {0}")]
    HypothesesUnmet(&'static str),

    #[error("support counts of the wrong kind (coarse = {0})")]
    CountsKind(bool),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name of the failing invariant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionTooSmall(_) => "dimension_too_small",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotNormalized(_) => "not_normalized",
            Error::NotHermitian(_) => "not_hermitian",
            Error::InvalidTrace(_) => "invalid_trace",
            Error::NotPositive(_) => "not_positive",
            Error::NotOrthonormal(_) => "not_orthonormal",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::InvalidPartition(_) => "invalid_partition",
            Error::InvalidAxes(_) => "invalid_axes",
            Error::TooFewBases { .. } => "too_few_bases",
            Error::InteriorAxis(_) => "interior_axis",
            Error::Conditioned => "conditioned",
            Error::MissingProvenance(_) => "missing_provenance",
            Error::VanishingPostselection(_) => "vanishing_postselection",
            Error::InconsistentPostselection { .. } => "inconsistent_postselection",
            Error::InvalidOutcome(_) => "invalid_outcome",
            Error::DegenerateOverlap(_) => "degenerate_overlap",
            Error::TargetOutOfRange { .. } => "target_out_of_range",
            Error::InvalidProbability(_) => "invalid_probability",
            Error::InvalidWeights(_) => "invalid_weights",
            Error::HypothesesUnmet(_) => "hypotheses_unmet",
            Error::CountsKind(_) => "counts_kind",
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::Inconsistent(_) => "inconsistent",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}
