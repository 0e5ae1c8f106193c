//! Command-line front end for `subeq-core`.
//!
//! Machine-readable output is JSON lines (stdout or `--records`), led by a
//! provenance record; human-readable notes go to stderr. Grid files are CSV.

pub mod catalog;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod output;
