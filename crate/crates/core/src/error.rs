use thiserror::Error;

/// Errors raised by the simulator, the spectral evaluators and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid side {0}: must be even and at least 4")]
    InvalidGrid(usize),

    #[error("vertex ({x},{y}) is outside the {n}x{n} torus")]
    VertexOutOfRange { x: usize, y: usize, n: usize },

    #[error("vertex ({x},{y}) is listed more than once")]
    DuplicateVertex { x: usize, y: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
