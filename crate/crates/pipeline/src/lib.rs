//! Texture featurization, dataset handling and the experiment runner around
//! `tnfin-core`.

pub mod config;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod featurize;
pub mod format;
pub mod report;
pub mod synth;

pub use error::{PipelineError, Result};
