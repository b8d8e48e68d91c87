use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("singular kernel: 1 - P(s)^2 = {value:e} at s = {s}")]
    SingularKernel { s: f64, value: f64 },

    #[error("degenerate pair: |P(|z-w|^2)| = 1 at separation {separation}")]
    DegeneratePair { separation: f64 },

    #[error("decay violation: {0}")]
    DecayViolation(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("alias-band violation: {0}")]
    AliasBand(String),

    #[error("field already in the GWHF plane")]
    AlreadyGwhf,

    #[error("truncation rule violated: need at least {required} terms, got {given}")]
    Truncation { required: usize, given: usize },

    #[error("unresolved zero cell at ({ix}, {iy}): winding {winding}, refine the grid")]
    Resolution { ix: usize, iy: usize, winding: i32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
