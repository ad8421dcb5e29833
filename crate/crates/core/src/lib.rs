//! Monitoring national AI strategies with indicators.
//!
//! The pipeline has three stages:
//!
//! 1. [`prevalence`] and [`consolidate`]: how often each preliminary
//!    indicator appears across strategies, which countries stand out, and
//!    the consolidated indicator set.
//! 2. [`alignment`]: placement of the consolidated set into a strategy's
//!    vertical and transversal axes, including overflow row and column.
//! 3. [`patterns`]: blind spots, inside/outside ratios and thin coverage.
//!
//! [`ingest`] reads the dataset directory, [`pipeline::analyze`] runs the
//! stages and [`report`] renders the results.

pub mod alignment;
pub mod cli;
pub mod config;
pub mod consolidate;
pub mod ingest;
pub mod model;
pub mod patterns;
pub mod pipeline;
pub mod prevalence;
pub mod reference;
pub mod report;

pub use config::AnalysisConfig;
pub use ingest::{load_bundle, DatasetBundle, LoadError};
pub use model::{normalize_code, IndicatorCode};
pub use pipeline::{analyze, Analysis, AnalysisError};
