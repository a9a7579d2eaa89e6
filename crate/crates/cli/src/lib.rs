//! Command-line front end for the disperscan simulator.

pub mod config;
pub mod csv_out;
pub mod error;
pub mod plot;
pub mod run;

pub use config::{Engine, Overrides, Plan, RunConfig};
pub use error::CliError;
