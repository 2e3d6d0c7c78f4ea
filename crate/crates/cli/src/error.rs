use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path} line {line}: {message}", path = path.display())]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Core(#[from] pmfd_core::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for anything the user can fix in the input, 3 for failures inside
    /// a run (instability, non-convergence, i/o).
    pub fn exit_code(&self) -> u8 {
        use pmfd_core::Error as E;
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Core(E::Domain(_) | E::Parse { .. } | E::Coverage(_)) => 2,
            CliError::Core(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// 1-based line of a byte offset.
pub fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}
