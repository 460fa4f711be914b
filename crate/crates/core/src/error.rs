use thiserror::Error;

/// Errors raised by mesh handling, constitutive evaluation and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mesh parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate element {cell}: {msg}")]
    DegenerateElement { cell: usize, msg: String },

    #[error("unsupported element {cell}: {msg}")]
    UnsupportedElement { cell: usize, msg: String },

    #[error("inverted element (det F = {det:e})")]
    InvertedElement { det: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("element {cell}: {source}")]
    Element {
        cell: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("Newton iteration did not converge after {iterations} iterations (last residual {last:e})")]
    NonConvergence {
        iterations: usize,
        last: f64,
        log: Vec<f64>,
    },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("load step {step} failed: {source}")]
    StepFailure {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("undefined convergence rate: {0}")]
    UndefinedRate(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps an element-level failure with the id of the offending cell.
    pub fn in_element(self, cell: usize) -> Self {
        Error::Element {
            cell,
            source: Box::new(self),
        }
    }

    /// Walks element/step wrappers and reports whether an inverted element caused the failure.
    pub fn is_inverted_element(&self) -> bool {
        match self {
            Error::InvertedElement { .. } => true,
            Error::Element { source, .. } | Error::StepFailure { source, .. } => {
                source.is_inverted_element()
            }
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
