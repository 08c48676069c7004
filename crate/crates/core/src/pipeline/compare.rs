use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ModelKind};
use super::corpus::LabeledCorpus;
use super::experiment::{corpus_features, run_model, ExperimentReport};
use crate::dataset::FeatureTable;
use crate::error::Result;

/// Per-sample classification time of each model at its best `k` for one
/// training fraction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub train_fraction: f64,
    pub model: ModelKind,
    pub k: Option<usize>,
    pub avg_seconds_per_sample: f64,
    pub comparisons_per_sample: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub models: Vec<ExperimentReport>,
    /// Wall-clock figures; serialized separately from the deterministic part.
    #[serde(skip)]
    pub timing: Vec<TimingRow>,
}

impl ComparisonReport {
    pub fn model(&self, kind: ModelKind) -> Option<&ExperimentReport> {
        self.models.iter().find(|m| m.model == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn timing_json(&self) -> String {
        serde_json::to_string_pretty(&self.timing).expect("timing serializes")
    }
}

pub fn timing_rows(report: &ExperimentReport) -> Vec<TimingRow> {
    report
        .best_per_fraction
        .iter()
        .filter_map(|c| {
            c.stats.as_ref().map(|s| TimingRow {
                train_fraction: c.train_fraction,
                model: report.model,
                k: c.k,
                avg_seconds_per_sample: s.avg_seconds_per_sample,
                comparisons_per_sample: s.comparisons_per_sample,
            })
        })
        .collect()
}

/// Run every configured model on identical splits of the same features.
pub fn compare_models(
    config: &ExperimentConfig,
    corpus: &LabeledCorpus,
) -> Result<ComparisonReport> {
    let table = corpus_features(config, corpus)?;
    compare_on_features(config, &table)
}

pub fn compare_on_features(
    config: &ExperimentConfig,
    table: &FeatureTable,
) -> Result<ComparisonReport> {
    let mut models = Vec::new();
    let mut timing = Vec::new();
    for &kind in &config.models {
        let report = run_model(config, table, kind)?;
        timing.extend(timing_rows(&report));
        models.push(report);
    }
    Ok(ComparisonReport { models, timing })
}
