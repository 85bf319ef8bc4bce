//! Command-line front end for `fif-core`: TOML configs, CSV/SVG/JSON
//! output, and the `verify`, `solve`, `attractor`, `analyze`, `all` stages.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod svg;

pub use commands::Run;
pub use config::RunConfig;
pub use error::CliError;
