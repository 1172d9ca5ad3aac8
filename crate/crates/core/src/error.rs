use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} outside supported range 1..={max}")]
    DimensionCap { dim: usize, max: usize },

    #[error("grade {grade} out of range for dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },

    #[error("expected a homogeneous grade-{expected} element")]
    WrongGrade { expected: usize },

    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("singular extensor (|det| = {det:e})")]
    SingularExtensor { det: f64 },

    #[error("singular frame (|det| = {det:e})")]
    SingularFrame { det: f64 },

    #[error("point {point:?} lies outside the chart domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("fields live on different charts")]
    ChartMismatch,

    #[error("domains do not overlap")]
    EmptyOverlap,

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("operation `{op}` is not defined for {operands}")]
    KindMismatch { op: String, operands: String },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("random draw stayed degenerate after {attempts} attempts: {reason}")]
    DegenerateDraw { attempts: usize, reason: String },
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
