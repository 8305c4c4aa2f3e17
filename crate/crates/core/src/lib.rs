//! Deterministic augmentation toolkit for multivariate time-series classification.
//!
//! The crate provides four augmentation kernels (window warp, cutout, mixup,
//! cutmix), ordered pipelines of those kernels with the shipped presets
//! `None` and `A`..`G`, a reader/writer for the UEA `.ts` archive format plus a
//! compact binary interchange format, seeded class-count-preserving
//! resampling of train/test splits, and a Welch t-test engine that renders
//! significance tables from per-fold accuracy files.
//!
//! Every random decision is drawn from a [`RandomStream`], whose derivation
//! scheme is fixed so that outputs are bit-reproducible for a given seed,
//! independent of thread count.

pub mod augment;
pub mod cli;
pub mod error;
pub mod evalkit;
pub mod ingest;
pub mod interp;
pub mod pipeline;
pub mod resample;
pub mod rng;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use rng::RandomStream;
pub use series::{average_labels, one_hot, Dataset, LabeledExample, Series};

/// Tool version; also reported in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
