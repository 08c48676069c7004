//! Color logo classification with interval-valued (symbolic) cluster
//! representatives.
//!
//! The pipeline resizes each logo, extracts 60 global color / texture / shape
//! features, clusters every class with K-means, summarises each cluster as
//! per-feature `[mean - std, mean + std]` intervals and classifies a crisp
//! query by counting how many of its features fall inside each
//! representative's intervals.

pub mod classify;
pub mod clustering;
pub mod dataset;
mod error;
pub mod eval;
mod files;
pub mod imaging;
pub mod pipeline;
pub mod symbolic;

pub use classify::{classify, ClassificationOutcome, Classifier};
pub use clustering::{ClusteringResult, KMeans};
pub use dataset::FeatureTable;
pub use error::{Error, Result};
pub use imaging::{FeatureConfig, FeatureExtractor, FeatureVector, ImageBuffer, Normalizer};
pub use symbolic::{
    build_reference, ClusterRepresentative, Interval, ReferenceMatrix, TrainedModel,
};
