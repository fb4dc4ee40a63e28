use thiserror::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    /// A physics operation failed while running `context`.
    #[error("{context}: {source}")]
    Run {
        context: String,
        #[source]
        source: gravphase::Error,
    },

    #[error("{source}\nsuggested interfere.times = {suggestion}")]
    Aliasing {
        #[source]
        source: gravphase::Error,
        suggestion: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Run {
                source: gravphase::Error::GridOverflow { .. },
                ..
            } => 3,
            CliError::Aliasing { .. } => 4,
            _ => 1,
        }
    }

    pub(crate) fn run(context: impl Into<String>) -> impl FnOnce(gravphase::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Run { context, source }
    }
}
