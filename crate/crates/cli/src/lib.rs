//! File formats, configuration and subcommands for the `fqeuclid` binary.

pub mod commands;
pub mod config;
pub mod dense;
pub mod error;
pub mod format;
