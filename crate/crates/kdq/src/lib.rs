//! File formats, parallel scans and the `kdq` command line on top of
//! [`kdq_core`].

pub mod cli;
pub mod error;
pub mod json;
pub mod parallel;
pub mod scan;

pub use error::CliError;
