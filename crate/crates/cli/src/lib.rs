//! Command-line front end: expressions, signal files, configs and the
//! verification suites.

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod random;
pub mod signal;
pub mod suites;

pub use commands::run;
pub use config::RunConfig;
pub use error::CliError;
