//! Corpus handling, splits, experiment sweeps and model comparison.

pub mod compare;
pub mod config;
pub mod corpus;
pub mod experiment;
pub mod report;
pub mod split;
pub mod synth;

pub use compare::{compare_models, compare_on_features, ComparisonReport, TimingRow};
pub use config::{ExperimentConfig, ModelKind};
pub use corpus::{cached_features, load_corpus, CorpusEntry, ImageSource, LabeledCorpus};
pub use experiment::{run_experiment, run_model, select_best, Cell, CellStats, ExperimentReport};
pub use split::{stratified_split, Split};
pub use synth::generate_synthetic;

impl LabeledCorpus {
    pub fn split(&self, fraction: f64, seed: u64) -> crate::Result<Split> {
        stratified_split(&self.labels(), self.num_classes(), fraction, seed)
    }
}
