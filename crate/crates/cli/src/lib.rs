//! Command-line front end for `gravphase`: strict TOML configuration,
//! experiment drivers with CSV output, and the `verify` check suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use config::RunConfig;
pub use error::CliError;
