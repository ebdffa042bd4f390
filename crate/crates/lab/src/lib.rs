//! Experiment harness for `permuton-lab-core`: the `permuton-lab` CLI,
//! reproducible CSV/JSONL sweeps and the `verify` property suites.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod verify;

pub use error::{LabError, LabResult};
