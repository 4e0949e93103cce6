use thiserror::Error;

/// Errors produced by the evaluation pipeline and the optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate geometry: buoys {first} and {second} coincide")]
    DegenerateGeometry { first: usize, second: usize },

    #[error("ill-conditioned system at omega = {omega} rad/s, beta = {beta} rad (condition estimate {condition:.3e})")]
    Numerical { omega: f64, beta: f64, condition: f64 },

    #[error("evaluation budget exhausted ({limit} evaluations)")]
    BudgetExhausted { limit: usize },

    #[error("buoy {index} at ({x:.3}, {y:.3}) lies outside the farm [0, {side:.3}]^2")]
    OutOfBounds { index: usize, x: f64, y: f64, side: f64 },

    #[error("degenerate landscape: all sampled powers equal")]
    DegenerateLandscape,

    #[error("placement infeasible: no candidate inside the farm after {attempts} draws")]
    PlacementInfeasible { attempts: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid scenario field `{field}`: {message}")]
    InvalidScenario { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
