//! Confusion matrices, accuracy / precision / recall / F-measure, timing.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::classify::Classifier;
use crate::error::{Error, Result};

/// Rows are true classes, columns predicted classes.
///
/// `unclassified[i]` counts samples of class `i` that received no
/// prediction. They lower accuracy and recall but not precision. The
/// classifiers in this crate always predict, so it stays zero unless a
/// matrix is built with [`ConfusionMatrix::with_class_totals`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "all_zero")]
    pub unclassified: Vec<u64>,
}

fn all_zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

impl ConfusionMatrix {
    pub fn zeros(m: usize) -> Self {
        Self {
            counts: vec![vec![0; m]; m],
            unclassified: vec![0; m],
        }
    }

    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let m = counts.len();
        if counts.iter().any(|r| r.len() != m) {
            return Err(Error::Format("confusion matrix must be square".into()));
        }
        Ok(Self {
            counts,
            unclassified: vec![0; m],
        })
    }

    /// Counts plus the known number of samples per true class, which may
    /// exceed the row sums.
    pub fn with_class_totals(counts: Vec<Vec<u64>>, totals: &[u64]) -> Result<Self> {
        let mut cm = Self::from_counts(counts)?;
        if totals.len() != cm.num_classes() {
            return Err(Error::DimensionMismatch {
                expected: cm.num_classes(),
                actual: totals.len(),
            });
        }
        for (i, &t) in totals.iter().enumerate() {
            let r = cm.row_sum(i);
            if t < r {
                return Err(Error::Format(format!(
                    "class {i} total {t} is below its row sum {r}"
                )));
            }
            cm.unclassified[i] = t - r;
        }
        Ok(cm)
    }

    pub fn num_classes(&self) -> usize {
        self.counts.len()
    }

    /// Evaluated samples, unclassified ones included.
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum::<u64>() + self.unclassified.iter().sum::<u64>()
    }

    /// Samples whose true class is `i`.
    pub fn class_total(&self, i: usize) -> u64 {
        self.row_sum(i) + self.unclassified.get(i).copied().unwrap_or(0)
    }

    pub fn trace(&self) -> u64 {
        (0..self.num_classes()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        self.counts.iter().map(|r| r[j]).sum()
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self.unclassified.resize(self.counts.len(), 0);
        for (x, y) in self.unclassified.iter_mut().zip(&other.unclassified) {
            *x += y;
        }
    }
}

pub fn confusion(truth: &[usize], pred: &[usize], m: usize) -> Result<ConfusionMatrix> {
    if truth.len() != pred.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            actual: pred.len(),
        });
    }
    let mut cm = ConfusionMatrix::zeros(m);
    for (&t, &p) in truth.iter().zip(pred) {
        if t >= m || p >= m {
            return Err(Error::InvalidArgument(format!(
                "label pair ({t}, {p}) outside {m} classes"
            )));
        }
        cm.counts[t][p] += 1;
    }
    Ok(cm)
}

/// All values in percent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub per_class_precision: Vec<f64>,
    pub per_class_recall: Vec<f64>,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// Classes never predicted: their precision was set to 0.
    pub undefined_precision: Vec<usize>,
    /// Classes absent from the truth labels: their recall was set to 0.
    pub undefined_recall: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub avg_time_per_sample: Option<f64>,
}

/// Harmonic mean of two fractions; 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::Empty("confusion matrix is empty".into()));
    }
    let m = cm.num_classes();
    let mut precision = Vec::with_capacity(m);
    let mut recall = Vec::with_capacity(m);
    let mut undefined_precision = Vec::new();
    let mut undefined_recall = Vec::new();
    for i in 0..m {
        let diag = cm.counts[i][i] as f64;
        match cm.col_sum(i) {
            0 => {
                undefined_precision.push(i);
                precision.push(0.0);
            }
            c => precision.push(diag / c as f64),
        }
        match cm.class_total(i) {
            0 => {
                undefined_recall.push(i);
                recall.push(0.0);
            }
            r => recall.push(diag / r as f64),
        }
    }
    let macro_p = precision.iter().sum::<f64>() / m as f64;
    let macro_r = recall.iter().sum::<f64>() / m as f64;
    Ok(MetricsReport {
        accuracy: 100.0 * cm.trace() as f64 / total as f64,
        per_class_precision: precision.iter().map(|p| 100.0 * p).collect(),
        per_class_recall: recall.iter().map(|r| 100.0 * r).collect(),
        precision: 100.0 * macro_p,
        recall: 100.0 * macro_r,
        f_measure: 100.0 * f_measure(macro_p, macro_r),
        undefined_precision,
        undefined_recall,
        avg_time_per_sample: None,
    })
}

#[derive(Clone, Debug)]
pub struct TimedPredictions {
    pub predictions: Vec<usize>,
    pub avg_seconds: f64,
    /// Reference items examined for each sample.
    pub comparisons: Vec<usize>,
}

/// Classify `samples` on the current thread, timing only the classification loop.
pub fn timed_classify<R: AsRef<[f64]>>(
    samples: &[R],
    model: &dyn Classifier,
) -> Result<TimedPredictions> {
    if samples.is_empty() {
        return Err(Error::Empty("no samples to classify".into()));
    }
    let mut predictions = Vec::with_capacity(samples.len());
    let mut comparisons = Vec::with_capacity(samples.len());
    let start = Instant::now();
    for s in samples {
        let p = model.predict(s.as_ref())?;
        predictions.push(p.class);
        comparisons.push(p.comparisons);
    }
    let elapsed = start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
    Ok(TimedPredictions {
        predictions,
        avg_seconds: elapsed / samples.len() as f64,
        comparisons,
    })
}

/// Min / max / mean of one metric over trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min: f64,
    pub max: f64,
    pub avg: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let avg = (values.iter().sum::<f64>() / values.len() as f64).clamp(min, max);
        Some(Self { min, max, avg })
    }
}
