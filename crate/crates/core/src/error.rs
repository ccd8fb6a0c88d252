use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("singular matrix: no nonzero pivot in column {column}")]
    SingularMatrix { column: usize },

    #[error("unsupported stencil half-width r = {r} (supported: 3..=6)")]
    UnsupportedOrder { r: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid weight parameters: {0}")]
    InvalidParams(String),

    #[error(
        "precision insufficient: expected error {expected_error:e} at the finest level is below \
         100x the field epsilon; at most {max_levels} levels are safe"
    )]
    PrecisionInsufficient { expected_error: f64, max_levels: usize },

    #[error("degenerate data: probed quantity vanished at level {level}")]
    DegenerateData { level: usize },

    #[error("non-finite input at index {index}")]
    NonFiniteInput { index: usize },

    #[error("solution blew up at t = {time} in cell {cell} (component {component})")]
    BlowUp { time: f64, cell: usize, component: usize },

    #[error("non-physical state in cell {cell}: rho = {density}, p = {pressure}")]
    NonPhysicalState { cell: usize, density: f64, pressure: f64 },

    #[error("characteristic solve did not converge at x = {x}, t = {t}")]
    NoConvergence { x: f64, t: f64 },

    #[error("characteristics cross before t = {t} (breaking time {breaking_time})")]
    PostShock { t: f64, breaking_time: f64 },

    #[error("table format error on line {line}: {message}")]
    TableFormat { line: usize, message: String },

    #[error("invalid problem setup: {0}")]
    InvalidProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
