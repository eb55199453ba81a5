//! Host-side companion to `comptonlab-core`: the constants config file,
//! rayon-parallel ensembles, CSV/JSON output and the `comptonlab` CLI.

pub mod cli;
pub mod config;
pub mod output;
pub mod parallel;

pub use comptonlab_core as core;
