use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, MirrorError>;

#[derive(Debug, Error)]
pub enum MirrorError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("sample dimension mismatch: set `{id}` has q={found}, expected q={expected}")]
    InconsistentSampleDimension {
        id: String,
        expected: usize,
        found: usize,
    },

    #[error("parameter dimension mismatch: set `{id}` has d={found}, expected d={expected}")]
    InconsistentParameterDimension {
        id: String,
        expected: usize,
        found: usize,
    },

    #[error("sets `{first}` and `{second}` share the parameter vector {params:?}")]
    DuplicateParameters {
        first: String,
        second: String,
        params: Vec<f64>,
    },

    #[error("duplicate set id `{0}`")]
    DuplicateId(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("sample sizes differ (expected n={expected}): {offending:?}")]
    UnequalSampleSizes {
        expected: usize,
        offending: Vec<(String, usize)>,
    },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid distance matrix: {0}")]
    InvalidDistanceMatrix(String),

    #[error("eigendecomposition did not converge for a {0}x{0} matrix")]
    EigenNonConvergence(usize),

    #[error("singular value decomposition did not converge")]
    SvdNonConvergence,

    #[error("no positive eigenvalue in the spectrum")]
    NoPositiveSpectrum,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("unsupported parameter dimension d={0} (only d=1 and d=2 are triangulated)")]
    UnsupportedDimension(usize),

    #[error("point lies outside simplex {simplex} (min barycentric coordinate {min_coord:e})")]
    OutsideSimplex { simplex: usize, min_coord: f64 },

    #[error("spline design is rank deficient with zero penalty; use a penalty > 0")]
    RankDeficient,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl MirrorError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        MirrorError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        MirrorError::Parse {
            line,
            message: message.into(),
        }
    }
}
