use crate::spec::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid state spec '{input}': {source}")]
    Parse { input: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] photostat::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status: 2 for anything the caller got wrong, 3 when a
    /// computation could not reach the requested accuracy, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Numeric(e) => match e {
                photostat::Error::Convergence { .. } | photostat::Error::Unsatisfiable { .. } => 3,
                photostat::Error::Domain(_)
                | photostat::Error::Infeasible { .. }
                | photostat::Error::Precondition(_) => 2,
            },
            CliError::Io(_) => 1,
        }
    }

    /// Message for stderr; parse errors get a caret under the offending byte.
    pub fn render(&self) -> String {
        match self {
            CliError::Parse { input, source } => format!("invalid state spec: {}", source.render(input)),
            other => other.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
