use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate projection at pixel ({u}, {v}): homogeneous scale {w:e}")]
    DegenerateProjection { u: f64, v: f64, w: f64 },

    #[error("detection of pedestrian {id} at frame {frame} cannot be projected: pixel ({u}, {v}), homogeneous scale {w:e}")]
    DetectionNotProjectable {
        id: i64,
        frame: u64,
        u: f64,
        v: f64,
        w: f64,
    },

    #[error("singular homography (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("trajectory {id} has {samples} sample(s), need at least 2")]
    TooShort { id: i64, samples: usize },

    #[error("invalid trajectory {id}: {reason}")]
    InvalidTrajectory { id: i64, reason: String },

    #[error("duplicate pedestrian id {id} in trajectory set")]
    DuplicateId { id: i64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid bounding box at line {line}: width {width}, height {height}")]
    InvalidBox { line: usize, width: f64, height: f64 },

    #[error("duplicate sample for pedestrian {id} at frame {frame}")]
    DuplicateSample { id: i64, frame: u64 },

    #[error("frame format error in {path}: {message}")]
    Format { path: String, message: String },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("frame {width}x{height} is smaller than the required {min}x{min}")]
    FrameTooSmall { width: usize, height: usize, min: usize },

    #[error("sequence too short: {sampled} sampled reference frame(s), need at least 2")]
    SequenceTooShort { sampled: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("trajectory set is empty")]
    EmptySet,

    #[error("no velocity samples (every trajectory has fewer than 2 samples)")]
    NoVelocitySamples,

    #[error("no pedestrian pair qualifies for passing distance")]
    NoQualifyingPairs,

    #[error("no non-stationary pedestrians")]
    NoMovers,

    #[error("point ({x}, {y}) is not strictly inside the boundary")]
    PointOutsideBoundary { x: f64, y: f64 },

    #[error("boundary polygon is degenerate")]
    DegenerateBoundary,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("scene mismatch: expected {expected:?}, found {found:?}")]
    SceneMismatch { expected: String, found: String },

    #[error("no candidate reports supplied")]
    EmptyCandidates,

    #[error("histograms use different binning")]
    BinningMismatch,

    #[error("histogram has zero total mass")]
    EmptyHistogram,

    #[error("{0} was not computed for this report")]
    NotComputed(String),
}

impl Error {
    /// Stable machine-readable name of the variant, used in serialized reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateProjection { .. } => "DegenerateProjection",
            Error::DetectionNotProjectable { .. } => "DegenerateProjection",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::TooShort { .. } => "TooShort",
            Error::InvalidTrajectory { .. } => "InvalidTrajectory",
            Error::DuplicateId { .. } => "DuplicateId",
            Error::Parse { .. } => "ParseError",
            Error::InvalidBox { .. } => "InvalidBox",
            Error::DuplicateSample { .. } => "DuplicateSample",
            Error::Format { .. } => "FormatError",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Io { .. } => "IoError",
            Error::FrameTooSmall { .. } => "FrameTooSmall",
            Error::SequenceTooShort { .. } => "SequenceTooShort",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::EmptySet => "EmptySet",
            Error::NoVelocitySamples => "NoVelocitySamples",
            Error::NoQualifyingPairs => "NoQualifyingPairs",
            Error::NoMovers => "NoMovers",
            Error::PointOutsideBoundary { .. } => "PointOutsideBoundary",
            Error::DegenerateBoundary => "DegenerateBoundary",
            Error::InsufficientData(_) => "InsufficientData",
            Error::SceneMismatch { .. } => "SceneMismatch",
            Error::EmptyCandidates => "EmptyCandidates",
            Error::BinningMismatch => "BinningMismatch",
            Error::EmptyHistogram => "EmptyHistogram",
            Error::NotComputed(_) => "NotComputed",
        }
    }
}
