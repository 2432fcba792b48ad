use frobcrys_core::Error as CoreError;

/// Failures of a scenario run, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: line {line}: {message}")]
    Schema { path: String, line: usize, message: String },
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("resource cap exceeded: dimension {dim} is above the cap {cap}")]
    ResourceCap { dim: usize, cap: usize },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ResourceCap { .. } => 3,
            _ => 2,
        }
    }

    /// Wraps a core error raised while working on the parameter at `path`.
    pub fn from_core(path: &str, err: CoreError) -> CliError {
        match err {
            CoreError::ResourceCap { dim, cap } => CliError::ResourceCap { dim, cap },
            other => CliError::Input { path: path.to_string(), message: other.to_string() },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attaches a parameter path to core results.
pub trait Context<T> {
    fn at(self, path: &str) -> CliResult<T>;
}

impl<T> Context<T> for frobcrys_core::Result<T> {
    fn at(self, path: &str) -> CliResult<T> {
        self.map_err(|e| CliError::from_core(path, e))
    }
}
