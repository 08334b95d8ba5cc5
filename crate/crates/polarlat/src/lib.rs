//! Standard-library companion to `polarlat-core`: file formats, a config
//! schema, worker-pool execution, and the CLI command implementations.

pub mod cli;
pub mod config;
pub mod relcache;
pub mod run;
pub mod specfile;

pub use polarlat_core as core;
