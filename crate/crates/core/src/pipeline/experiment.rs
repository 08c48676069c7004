//! Train/test sweeps over training fractions, cluster counts and trials.

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ModelKind};
use super::corpus::{cached_features, LabeledCorpus};
use super::split::{stratified_split, train_count, Split};
use crate::classify::{Classifier, ClusterMeans, NearestNeighbor};
use crate::dataset::FeatureTable;
use crate::error::{Error, Result};
use crate::eval::{confusion, metrics, timed_classify, ConfusionMatrix, MetricsReport, Summary};
use crate::imaging::{FeatureExtractor, Normalizer};
use crate::symbolic::build_reference;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Misclassification {
    pub path: String,
    pub truth: String,
    pub predicted: String,
}

/// Outcome of one model on one split.
#[derive(Clone, Debug)]
pub struct TrialResult {
    pub metrics: MetricsReport,
    pub confusion: ConfusionMatrix,
    pub split_fingerprint: u64,
    pub avg_seconds: f64,
    /// Reference items examined per test sample (constant within a trial).
    pub comparisons_per_sample: usize,
    pub misclassified: Vec<Misclassification>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub accuracy: Summary,
    pub precision: Summary,
    pub recall: Summary,
    pub f_measure: Summary,
    pub comparisons_per_sample: usize,
    /// Trial whose F-measure is closest to the cell average.
    pub representative_trial: usize,
    pub confusion: ConfusionMatrix,
    pub misclassified: Vec<Misclassification>,
    pub split_fingerprints: Vec<u64>,
    /// Mean classification time per sample across trials; wall-clock, so it
    /// is kept out of the serialized report.
    #[serde(skip)]
    pub avg_seconds_per_sample: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub train_fraction: f64,
    /// `None` for models without a cluster count.
    pub k: Option<usize>,
    pub trials: usize,
    pub stats: Option<CellStats>,
    pub skipped: Option<String>,
}

impl Cell {
    pub fn avg_f(&self) -> Option<f64> {
        self.stats.as_ref().map(|s| s.f_measure.avg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub model: ModelKind,
    pub class_names: Vec<String>,
    /// Fraction-major, then `k`, in configuration order.
    pub cells: Vec<Cell>,
    /// Highest average F-measure per training fraction.
    pub best_per_fraction: Vec<Cell>,
    /// Highest average F-measure overall.
    pub best: Option<Cell>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn cell(&self, fraction: f64, k: Option<usize>) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.train_fraction == fraction && c.k == k)
    }
}

/// First cell with the maximal average F-measure.
pub fn select_best<'a>(cells: impl IntoIterator<Item = &'a Cell>) -> Option<Cell> {
    let mut best: Option<&Cell> = None;
    for c in cells {
        if let Some(f) = c.avg_f() {
            if best.and_then(Cell::avg_f).is_none_or(|b| f > b) {
                best = Some(c);
            }
        }
    }
    best.cloned()
}

/// Feature table for the corpus, honouring the configured cache directory.
pub fn corpus_features(config: &ExperimentConfig, corpus: &LabeledCorpus) -> Result<FeatureTable> {
    let extractor = FeatureExtractor::new(config.feature_config())?;
    cached_features(corpus, &extractor, config.cache_dir.as_deref())
}

/// Sweep the proposed classifier over the configured grid.
pub fn run_experiment(
    config: &ExperimentConfig,
    corpus: &LabeledCorpus,
) -> Result<ExperimentReport> {
    let table = corpus_features(config, corpus)?;
    run_model(config, &table, ModelKind::Proposed)
}

/// Normalized train and test tables for a split. The normalizer only sees
/// training rows.
pub fn prepare_split(table: &FeatureTable, split: &Split) -> Result<(FeatureTable, FeatureTable)> {
    debug_assert!(split
        .train
        .iter()
        .all(|i| split.test.binary_search(i).is_err()));
    let train_raw = table.select(&split.train);
    let norm = Normalizer::fit(&train_raw.rows)?;
    let train = train_raw.map_rows(|r| norm.apply(r))?;
    let test = table.select(&split.test).map_rows(|r| norm.apply(r))?;
    Ok((train, test))
}

/// Fit one model on `train` and evaluate it on `test`.
pub fn run_trial(
    kind: ModelKind,
    train: &FeatureTable,
    test: &FeatureTable,
    k: usize,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<TrialResult> {
    let kmeans = config.kmeans();
    let model: Box<dyn Classifier> = match kind {
        ModelKind::Proposed => Box::new(build_reference(train, k, &kmeans, seed)?),
        ModelKind::NearestNeighbor => Box::new(NearestNeighbor::new(train.clone())?),
        ModelKind::ClusterMean => Box::new(ClusterMeans::fit(train, k, &kmeans, seed)?),
    };
    let timed = timed_classify(&test.rows, model.as_ref())?;
    let m = train.num_classes();
    let cm = confusion(&test.labels, &timed.predictions, m)?;
    let mut report = metrics(&cm)?;
    report.avg_time_per_sample = Some(timed.avg_seconds);
    let misclassified = test
        .labels
        .iter()
        .zip(&timed.predictions)
        .enumerate()
        .filter(|(_, (t, p))| t != p)
        .map(|(i, (&t, &p))| Misclassification {
            path: test.paths[i].clone(),
            truth: test.class_names[t].clone(),
            predicted: test.class_names[p].clone(),
        })
        .collect();
    Ok(TrialResult {
        metrics: report,
        confusion: cm,
        split_fingerprint: 0,
        avg_seconds: timed.avg_seconds,
        comparisons_per_sample: timed.comparisons.first().copied().unwrap_or(0),
        misclassified,
    })
}

fn aggregate(trials: &[TrialResult]) -> CellStats {
    let pick = |f: fn(&MetricsReport) -> f64| -> Vec<f64> {
        trials.iter().map(|t| f(&t.metrics)).collect()
    };
    let f_values = pick(|m| m.f_measure);
    let f_measure = Summary::of(&f_values).expect("at least one trial");
    let representative_trial = f_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, f)| {
            let gap = (f - f_measure.avg).abs();
            if gap < best.1 {
                (i, gap)
            } else {
                best
            }
        })
        .0;
    let rep = &trials[representative_trial];
    CellStats {
        accuracy: Summary::of(&pick(|m| m.accuracy)).expect("trials"),
        precision: Summary::of(&pick(|m| m.precision)).expect("trials"),
        recall: Summary::of(&pick(|m| m.recall)).expect("trials"),
        f_measure,
        comparisons_per_sample: rep.comparisons_per_sample,
        representative_trial,
        confusion: rep.confusion.clone(),
        misclassified: rep.misclassified.clone(),
        split_fingerprints: trials.iter().map(|t| t.split_fingerprint).collect(),
        avg_seconds_per_sample: trials.iter().map(|t| t.avg_seconds).sum::<f64>()
            / trials.len() as f64,
    }
}

/// Why `k` clusters per class cannot be built at this fraction, if so.
fn infeasibility(table: &FeatureTable, fraction: f64, k: usize) -> Option<String> {
    table.class_counts().iter().enumerate().find_map(|(c, &n)| {
        let n_train = if n < 2 { 0 } else { train_count(n, fraction) };
        (n_train < k).then(|| {
            format!(
                "class '{}' has {n_train} training samples at fraction {fraction}, need {k}",
                table.class_names[c]
            )
        })
    })
}

/// Sweep one model over fractions x k x trials. Trial `t` splits with seed
/// `config.seed + t`; every model therefore sees identical partitions.
pub fn run_model(
    config: &ExperimentConfig,
    table: &FeatureTable,
    kind: ModelKind,
) -> Result<ExperimentReport> {
    config.validate()?;
    if table.num_classes() < 2 {
        return Err(Error::TooFewClasses(table.num_classes()));
    }
    let ks: Vec<Option<usize>> = if kind.uses_k() {
        config.k_values.iter().map(|&k| Some(k)).collect()
    } else {
        vec![None]
    };

    let mut cells = Vec::new();
    for &fraction in &config.train_fractions {
        let skipped: Vec<Option<String>> = ks
            .iter()
            .map(|k| infeasibility(table, fraction, k.unwrap_or(1)))
            .collect();
        let mut results: Vec<Vec<TrialResult>> = vec![Vec::new(); ks.len()];
        if skipped.iter().any(Option::is_none) {
            for t in 0..config.trials {
                let seed = config.seed.wrapping_add(t as u64);
                let split = stratified_split(&table.labels, table.num_classes(), fraction, seed)?;
                let fingerprint = split.fingerprint();
                let (train, test) = prepare_split(table, &split)?;
                for (ki, k) in ks.iter().enumerate() {
                    if skipped[ki].is_some() {
                        continue;
                    }
                    let mut r = run_trial(kind, &train, &test, k.unwrap_or(1), config, seed)?;
                    r.split_fingerprint = fingerprint;
                    results[ki].push(r);
                }
            }
        }
        for ((k, reason), trials) in ks.iter().zip(skipped).zip(results) {
            cells.push(Cell {
                train_fraction: fraction,
                k: *k,
                trials: trials.len(),
                stats: (!trials.is_empty()).then(|| aggregate(&trials)),
                skipped: reason,
            });
        }
    }

    let best_per_fraction: Vec<Cell> = config
        .train_fractions
        .iter()
        .filter_map(|&f| select_best(cells.iter().filter(|c| c.train_fraction == f)))
        .collect();
    let best = select_best(&best_per_fraction);
    if best.is_none() {
        return Err(Error::Infeasible(format!(
            "every cell of the {kind} sweep was skipped; the corpus is too small for the requested k values"
        )));
    }
    Ok(ExperimentReport {
        model: kind,
        class_names: table.class_names.clone(),
        cells,
        best_per_fraction,
        best,
    })
}
