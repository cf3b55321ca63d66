//! Command line and HTTP front end for the `shg` engine.
//!
//! Run `shg --help` for the subcommands; `shg serve` starts the JSON API
//! used by the pattern-learning workbench.

pub mod cli;
pub mod commands;
pub mod config;
pub mod service;
pub mod sessions;
