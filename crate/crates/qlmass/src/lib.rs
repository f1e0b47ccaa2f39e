//! File formats, reports and the command-line driver for `qlmass-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod export;
pub mod io;
pub mod report;

pub use config::RunConfig;
pub use error::{Error, Result};
