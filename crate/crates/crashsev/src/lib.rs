//! Crash-severity analytics and classification over US accident CSVs.
//!
//! The crate covers the full pipeline: CSV ingestion and cleaning into a
//! partitioned columnar store, feature encoding, three from-scratch
//! classifiers (logistic regression, k-NN, random forest), an evaluation
//! suite (confusion matrices, ROC/PR curves, feature importance),
//! exploratory aggregations, and SVG report rendering. The `crashsev`
//! binary exposes each stage as a subcommand plus a resumable `run`
//! pipeline.

pub mod analytics;
pub mod error;
pub mod features;
pub mod ingest;
pub mod metrics;
pub mod models;
pub mod report;

pub use error::{Error, Result};
