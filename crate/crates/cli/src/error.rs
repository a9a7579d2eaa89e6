use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("materials error: {0}")]
    Materials(disperscan::Error),

    #[error("{0}")]
    Numerical(disperscan::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Core(disperscan::Error),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl ToString) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 configuration, 3 materials, 4 numerical, 1 other.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Materials(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io { .. } | CliError::Core(_) => 1,
        }
    }
}

impl From<disperscan::Error> for CliError {
    fn from(e: disperscan::Error) -> Self {
        use disperscan::Error as E;
        match e {
            E::UnknownMaterial { .. } | E::MaterialsFile { .. } | E::MaterialRange { .. } => {
                CliError::Materials(e)
            }
            E::NumericalFailure(_) => CliError::Numerical(e),
            E::Io { path, source } => CliError::Io { path, source },
            other => CliError::Core(other),
        }
    }
}
