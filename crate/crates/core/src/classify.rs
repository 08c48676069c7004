//! Acceptance-count interval classifier and the two nearest-neighbour baselines.

use serde::Serialize;

use crate::clustering::squared_distance;
use crate::dataset::FeatureTable;
use crate::error::{Error, Result};
use crate::symbolic::{ClusterRepresentative, Interval, ReferenceMatrix};

/// 1 when `s` lies in the closed interval, else 0.
#[inline]
pub fn similarity(s: f64, interval: &Interval) -> u32 {
    u32::from(interval.contains(s))
}

pub fn acceptance_count(sample: &[f64], rep: &ClusterRepresentative) -> Result<usize> {
    if sample.len() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            actual: sample.len(),
        });
    }
    Ok(sample
        .iter()
        .zip(&rep.intervals)
        .map(|(&s, iv)| similarity(s, iv) as usize)
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationOutcome {
    pub predicted_class: usize,
    /// `(class, cluster)` of the first representative of the predicted class
    /// reaching the maximal count.
    pub best_representative: (usize, usize),
    pub acceptance_counts: Vec<usize>,
    pub max_count: usize,
    /// Representatives of more than one class share the maximal count.
    pub tie: bool,
    /// The sample falls inside no interval of any representative.
    pub out_of_coverage: bool,
}

/// Score `sample` against every representative and pick the class.
///
/// Ties on the maximal count go to the class owning the most tied
/// representatives, then to the smallest class index.
pub fn classify(sample: &[f64], reference: &ReferenceMatrix) -> Result<ClassificationOutcome> {
    if reference.is_empty() {
        return Err(Error::Empty(
            "reference matrix has no representatives".into(),
        ));
    }
    let counts = reference
        .representatives()
        .iter()
        .map(|rep| acceptance_count(sample, rep))
        .collect::<Result<Vec<_>>>()?;
    Ok(resolve(
        &counts,
        reference.representatives(),
        reference.num_classes(),
    ))
}

pub(crate) fn resolve(
    counts: &[usize],
    reps: &[ClusterRepresentative],
    num_classes: usize,
) -> ClassificationOutcome {
    let max_count = counts.iter().copied().max().unwrap_or(0);
    let mut votes = vec![0usize; num_classes];
    for (rep, &c) in reps.iter().zip(counts) {
        if c == max_count {
            votes[rep.class_label] += 1;
        }
    }
    let tied_classes = votes.iter().filter(|&&v| v > 0).count();
    let top = votes.iter().copied().max().unwrap_or(0);
    let predicted_class = votes.iter().position(|&v| v == top).unwrap_or(0);
    let best = reps
        .iter()
        .zip(counts)
        .find(|(rep, &c)| rep.class_label == predicted_class && c == max_count)
        .map(|(rep, _)| (rep.class_label, rep.cluster_index))
        .unwrap_or((predicted_class, 0));
    ClassificationOutcome {
        predicted_class,
        best_representative: best,
        acceptance_counts: counts.to_vec(),
        max_count,
        tie: tied_classes > 1,
        out_of_coverage: max_count == 0,
    }
}

/// Label of the nearest row; equal distances go to the smallest row index.
pub fn knn1_classify(sample: &[f64], train: &FeatureTable) -> Result<usize> {
    nearest_label(sample, &train.rows, &train.labels).map(|(label, _)| label)
}

/// Label of the nearest labeled centroid.
pub fn cluster_mean_classify(sample: &[f64], centroids: &[(Vec<f64>, usize)]) -> Result<usize> {
    let (rows, labels): (Vec<_>, Vec<_>) =
        centroids.iter().map(|(c, l)| (c.as_slice(), *l)).unzip();
    nearest_label(sample, &rows, &labels).map(|(label, _)| label)
}

/// Returns the winning label and the number of distance evaluations.
fn nearest_label<R: AsRef<[f64]>>(
    sample: &[f64],
    rows: &[R],
    labels: &[usize],
) -> Result<(usize, usize)> {
    if rows.is_empty() {
        return Err(Error::Empty("no reference samples".into()));
    }
    let mut best = (f64::INFINITY, 0);
    let mut evaluated = 0;
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != sample.len() {
            return Err(Error::DimensionMismatch {
                expected: row.len(),
                actual: sample.len(),
            });
        }
        evaluated += 1;
        let d = squared_distance(sample, row);
        if d < best.0 {
            best = (d, i);
        }
    }
    Ok((labels[best.1], evaluated))
}

/// A single prediction plus how many reference items were examined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub class: usize,
    pub comparisons: usize,
}

/// Common face of the three compared models.
pub trait Classifier {
    fn predict(&self, sample: &[f64]) -> Result<Prediction>;
}

impl Classifier for ReferenceMatrix {
    fn predict(&self, sample: &[f64]) -> Result<Prediction> {
        let outcome = classify(sample, self)?;
        Ok(Prediction {
            class: outcome.predicted_class,
            comparisons: outcome.acceptance_counts.len(),
        })
    }
}

/// Model-1: 1-NN over all training samples.
#[derive(Clone, Debug)]
pub struct NearestNeighbor {
    train: FeatureTable,
}

impl NearestNeighbor {
    pub fn new(train: FeatureTable) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::Empty(
                "1-NN needs at least one training sample".into(),
            ));
        }
        Ok(Self { train })
    }
}

impl Classifier for NearestNeighbor {
    fn predict(&self, sample: &[f64]) -> Result<Prediction> {
        let (class, comparisons) = nearest_label(sample, &self.train.rows, &self.train.labels)?;
        Ok(Prediction { class, comparisons })
    }
}

/// Model-2: 1-NN over per-class K-means centroids.
#[derive(Clone, Debug)]
pub struct ClusterMeans {
    centroids: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl ClusterMeans {
    pub fn new(centroids: Vec<(Vec<f64>, usize)>) -> Result<Self> {
        if centroids.is_empty() {
            return Err(Error::Empty("no centroids".into()));
        }
        let (centroids, labels) = centroids.into_iter().unzip();
        Ok(Self { centroids, labels })
    }

    /// Per-class K-means on `train`; class `c` uses seed `seed + c`.
    pub fn fit(
        train: &FeatureTable,
        k: usize,
        kmeans: &crate::clustering::KMeans,
        seed: u64,
    ) -> Result<Self> {
        let mut out = Vec::new();
        for class in 0..train.num_classes() {
            let members: Vec<&Vec<f64>> = train
                .class_indices(class)
                .into_iter()
                .map(|i| &train.rows[i])
                .collect();
            if members.len() < k {
                return Err(Error::InsufficientSamples {
                    class: train.class_names[class].clone(),
                    required: k,
                    available: members.len(),
                });
            }
            let result = kmeans.fit(&members, k, seed.wrapping_add(class as u64))?;
            out.extend(result.centroids.into_iter().map(|c| (c, class)));
        }
        Self::new(out)
    }

    pub fn len(&self) -> usize {
        self.centroids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centroids.is_empty()
    }
}

impl Classifier for ClusterMeans {
    fn predict(&self, sample: &[f64]) -> Result<Prediction> {
        let (class, comparisons) = nearest_label(sample, &self.centroids, &self.labels)?;
        Ok(Prediction { class, comparisons })
    }
}
