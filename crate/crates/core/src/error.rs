use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inputs outside the range where the problem is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration (bisection, shooting, quadrature) did not converge, or a
    /// non-finite value appeared.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A cell went negative beyond the clamp tolerance during a step.
    #[error("instability in cell {cell} at t = {time}: value {value:e}")]
    Instability { cell: usize, time: f64, value: f64 },

    /// A mapped field would fall off the target grid.
    #[error("coverage error: {0}")]
    Coverage(String),

    #[error("i/o error on {path}: {source}", path = path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path} line {line}: {message}", path = path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::NumericalFailure(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
