use thiserror::Error;

use crate::degree::Degree;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a k-graph document was rejected after parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("rank k must be at least 1")]
    ZeroRank,
    #[error("graph has no vertices")]
    NoVertices,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    DanglingVertex { edge: String, vertex: String },
    #[error("square refers to unknown edge `{0}`")]
    DanglingEdge(String),
    #[error("edge `{edge}` has color {color}, outside 1..={k}")]
    ColorOutOfRange { edge: String, color: usize, k: usize },
    #[error("square {left:?} = {right:?} is malformed: {reason}")]
    MalformedSquare {
        left: Vec<String>,
        right: Vec<String>,
        reason: String,
    },
    #[error("no factorization square covers the composable pair {0:?}")]
    MissingSquare(Vec<String>),
    #[error("the pair {0:?} appears in more than one square")]
    NonBijectiveSquares(Vec<String>),
    #[error("cube condition fails for {word:?}: distinct normal forms {forms:?}")]
    CubeConditionFailure { word: Vec<String>, forms: Vec<Vec<String>> },
    #[error("vertex matrices A_{0} and A_{1} do not commute")]
    NonCommutingMatrices(usize, usize),
}

impl ValidationError {
    /// Stable machine-readable reason tag.
    pub fn reason(&self) -> &'static str {
        match self {
            ValidationError::ZeroRank => "zero-rank",
            ValidationError::NoVertices => "no-vertices",
            ValidationError::DuplicateVertex(_) => "duplicate-vertex",
            ValidationError::DuplicateEdge(_) => "duplicate-edge",
            ValidationError::DanglingVertex { .. } => "dangling-vertex",
            ValidationError::DanglingEdge(_) => "dangling-edge",
            ValidationError::ColorOutOfRange { .. } => "color-out-of-range",
            ValidationError::MalformedSquare { .. } => "malformed-square",
            ValidationError::MissingSquare(_) => "missing-square",
            ValidationError::NonBijectiveSquares(_) => "non-bijective-squares",
            ValidationError::CubeConditionFailure { .. } => "cube-condition-failure",
            ValidationError::NonCommutingMatrices(..) => "non-commuting-matrices",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(#[from] ValidationError),
    #[error("edges {0} and {1} are not composable")]
    Composition(String, String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("degree range error: need {lower} <= {upper}")]
    DegreeRange { lower: Degree, upper: Degree },
    #[error("degree has {got} entries, graph has rank {expected}")]
    DegreeLength { expected: usize, got: usize },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("vertex `{vertex}` receives no edge of color {color}")]
    HasSources { vertex: String, color: usize },
    #[error("iteration did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("hausdorff dimension needs more than one vertex")]
    DegenerateVertexCount,
    #[error("vertex matrix A_{color} has entry {value} > 1")]
    NotZeroOne { color: usize, value: u64 },
    #[error("bad Bernoulli weights: {0}")]
    BadWeights(String),
    #[error("Bernoulli measures need a one-vertex 1-graph")]
    NotBouquet,
    #[error("test level {0} is too small for the relation checks")]
    LevelTooSmall(Degree),
    #[error("operator levels do not match: {0}")]
    LevelMismatch(String),
    #[error("wavelet shape {0} must have all entries >= 1")]
    BadShape(Degree),
    #[error("vertex `{0}` has no paths of the wavelet shape")]
    EmptyDv(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("preferred paths invalid: {0}")]
    BadPreferredPaths(String),
    #[error("no degree class has two or more preferred paths")]
    NoWaveletDegree,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    AsymmetricInput(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("kernel evaluated at negative argument {0}")]
    NegativeArgument(f64),
    #[error("kernel integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("t-grid too coarse: eigenvalue {eigenvalue} integrates to {got}, expected {expected}")]
    GridTooCoarse { eigenvalue: f64, got: f64, expected: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Coarse error class used for exit codes and error records.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_) => ErrorClass::Parse,
            Error::Validation(_)
            | Error::Composition(..)
            | Error::UnknownEdge(_)
            | Error::UnknownVertex(_)
            | Error::DegreeRange { .. }
            | Error::DegreeLength { .. }
            | Error::NotStronglyConnected
            | Error::HasSources { .. }
            | Error::DegenerateVertexCount
            | Error::NotZeroOne { .. }
            | Error::BadWeights(_)
            | Error::NotBouquet
            | Error::LevelTooSmall(_)
            | Error::LevelMismatch(_)
            | Error::BadShape(_)
            | Error::EmptyDv(_)
            | Error::ShapeMismatch(_)
            | Error::BadPreferredPaths(_)
            | Error::NoWaveletDegree
            | Error::DimensionMismatch { .. }
            | Error::InvalidArgument(_) => ErrorClass::Validation,
            Error::ConvergenceFailure(_)
            | Error::AsymmetricInput(_)
            | Error::NegativeArgument(_)
            | Error::DivergentIntegral(_)
            | Error::GridTooCoarse { .. } => ErrorClass::Numeric,
        }
    }

    /// Short kebab-case tag naming the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Validation(v) => v.reason(),
            Error::Composition(..) => "composition",
            Error::UnknownEdge(_) => "unknown-edge",
            Error::UnknownVertex(_) => "unknown-vertex",
            Error::DegreeRange { .. } => "degree-range",
            Error::DegreeLength { .. } => "degree-length",
            Error::NotStronglyConnected => "not-strongly-connected",
            Error::HasSources { .. } => "has-sources",
            Error::ConvergenceFailure(_) => "convergence-failure",
            Error::DegenerateVertexCount => "degenerate-vertex-count",
            Error::NotZeroOne { .. } => "not-zero-one",
            Error::BadWeights(_) => "bad-weights",
            Error::NotBouquet => "not-bouquet",
            Error::LevelTooSmall(_) => "level-too-small",
            Error::LevelMismatch(_) => "level-mismatch",
            Error::BadShape(_) => "bad-shape",
            Error::EmptyDv(_) => "empty-dv",
            Error::ShapeMismatch(_) => "shape-mismatch",
            Error::BadPreferredPaths(_) => "bad-preferred-paths",
            Error::NoWaveletDegree => "no-wavelet-degree",
            Error::AsymmetricInput(_) => "asymmetric-input",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NegativeArgument(_) => "negative-argument",
            Error::DivergentIntegral(_) => "divergent-integral",
            Error::GridTooCoarse { .. } => "grid-too-coarse",
            Error::InvalidArgument(_) => "invalid-argument",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Validation,
    Numeric,
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
