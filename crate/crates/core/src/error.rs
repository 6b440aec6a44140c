use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised while parsing or validating a mesh. Each variant names the
/// offending line or entity so that a broken file can be fixed by hand.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cell {cell}: {message}")]
    Cell { cell: usize, message: String },
    #[error("boundary edge {edge}: {message}")]
    Edge { edge: usize, message: String },
    #[error("invalid mesh: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inconsistent or out-of-range user parameters.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("mesh error: {0}")]
    Mesh(#[from] MeshError),
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("diagnostic error: {0}")]
    Diagnostic(String),
    #[error("i/o error: {context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { context: context.into(), source }
    }
}
