use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error(
        "wavelength {wavelength_um:.6} um is outside the validity range \
         [{min_um}, {max_um}] um of material `{material}`"
    )]
    MaterialRange {
        material: String,
        wavelength_um: f64,
        min_um: f64,
        max_um: f64,
    },

    #[error("unknown material `{id}` in materials file {path}")]
    UnknownMaterial { id: String, path: String },

    #[error("malformed materials data ({path}): {message}")]
    MaterialsFile { path: String, message: String },

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::NumericalFailure(msg.into())
    }
}
