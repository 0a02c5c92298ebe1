//! Command-line frontend for `hkrlab`: run configuration, dispatch and
//! deterministic report emission.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod report;

pub use commands::dispatch;
pub use config::{Cli, Command, Format, RunConfig, UsageError};
pub use report::{emit, Report};
