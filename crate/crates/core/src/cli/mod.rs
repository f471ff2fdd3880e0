//! Command-line front end: configuration, runs, CSV/SVG output.

pub mod commands;
pub mod config;
pub mod svg;

pub use commands::{execute, run_bound_scan, run_dynamics, run_qsl_sweep, run_reproduce, RunError};
pub use config::{parse_config, parse_config_text, parse_kv, Command, ConfigError, Flags, Panel, RunManifest};
