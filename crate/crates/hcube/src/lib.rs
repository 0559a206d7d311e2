//! File formats, reports and the `hcube` command line on top of
//! [`hcube_core`].

pub mod cli;
pub mod error;
pub mod format;
pub mod report;

pub use error::CliError;
