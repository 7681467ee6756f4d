//! Experiment driver for the `ofdm-mismatch` solver: configuration parsing,
//! parallel sweeps over PAPR levels and null sets, and the on-disk artifacts.

pub mod artifact;
pub mod config;
pub mod error;
pub mod experiment;

pub use artifact::{emit_profile, PairMetrics, SequenceArtifact};
pub use config::{parse_config, parse_config_with, ExperimentSpec, NullRange};
pub use error::{CliError, ConfigError};
pub use experiment::{run_experiment, run_sweep, SweepReport};
