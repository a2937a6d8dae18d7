//! Experiment harness for prediction-guided search.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

pub use commands::{
    cmd_lowerbound, cmd_net, cmd_run, cmd_sweep, LowerBoundOutput, NetSummary, RunOutput,
    SweepOutput, SweepParams, SweepRow,
};
pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
