use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stage that produced an estimator failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Hankel,
    Order,
    Pencil,
    Clustering,
    Exponents,
    Coefficients,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Hankel => "hankel",
            Stage::Order => "order",
            Stage::Pencil => "pencil",
            Stage::Clustering => "clustering",
            Stage::Exponents => "exponents",
            Stage::Coefficients => "coefficients",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid sample grid: {0}")]
    InvalidGrid(String),

    #[error("not enough samples: need at least {required}, got {available}")]
    Sizing { required: usize, available: usize },

    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("estimated model order is zero: all {count} singular values are below {threshold:e}")]
    OrderZero { count: usize, threshold: f64 },

    #[error("{kernel} did not converge within {iterations} iterations")]
    KernelFailure {
        kernel: &'static str,
        iterations: usize,
    },

    #[error("degenerate pencil: stacked matrix has numerical column rank {rank} < {cols}")]
    DegeneratePencil { rank: usize, cols: usize },

    #[error("singular pencil: diagonal entry {index} of the reference factor is {ratio:e} of its maximum")]
    SingularPencil { index: usize, ratio: f64 },

    #[error("ill-posed least-squares system: numerical rank {rank} < {cols} columns")]
    IllPosed { rank: usize, cols: usize },

    #[error("eigenvalue cluster at {center} is too close to zero to take a logarithm")]
    DegenerateZero { center: num_complex::Complex64 },

    #[error("unknown example id `{0}`")]
    UnknownExample(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{stage} stage: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Stage of the estimator pipeline that failed, when known.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }

    /// The innermost error, with stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for errors caused by bad input files or I/O, as opposed to numerical failures.
    pub fn is_io(&self) -> bool {
        matches!(
            self.root(),
            Error::Io(_) | Error::Json(_) | Error::Config(_) | Error::UnknownExample(_)
        )
    }
}

pub(crate) trait ResultExt<T> {
    fn at(self, stage: Stage) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn at(self, stage: Stage) -> Result<T> {
        self.map_err(|e| e.at(stage))
    }
}
