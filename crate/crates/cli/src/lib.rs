//! Command-line front end for the `beadgap` band solver.
//!
//! Subcommands `trace`, `bands`, `stats` and `verify` share one JSON run
//! configuration; flags override its fields and the effective configuration
//! is echoed into every report.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{cmd_bands, cmd_stats, cmd_trace, cmd_verify, InsufficientRange, Outcome};
pub use config::{ConfigError, ConfigFile, Format, RunConfig};
