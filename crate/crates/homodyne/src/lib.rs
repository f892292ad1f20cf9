//! File formats, parallel sweeps and the command-line driver for
//! `homodyne-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod sweeps;

pub use config::{Command, Format, RunConfig};
pub use error::{CliError, ExitCode};
