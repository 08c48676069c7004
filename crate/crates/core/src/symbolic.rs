//! Interval-valued cluster representatives and the reference matrix.
//!
//! Each cluster of each class is summarised per feature by the interval
//! `[mean - std, mean + std]`, where `std` uses the `n - 1` denominator.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clustering::KMeans;
use crate::dataset::FeatureTable;
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Format(format!(
                "interval [{lo}, {hi}] is reversed or NaN"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn around(mean: f64, std: f64) -> Self {
        Self {
            lo: mean - std,
            hi: mean + std,
        }
    }

    #[inline]
    pub fn contains(&self, s: f64) -> bool {
        s >= self.lo && s <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn half_width(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }
}

/// Column means and sample standard deviations of `samples`.
/// A single sample has standard deviation 0.
pub fn cluster_stats<R: AsRef<[f64]>>(samples: &[R]) -> Result<(Vec<f64>, Vec<f64>)> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Empty("cluster has no samples".into()))?;
    let d = first.as_ref().len();
    let n = samples.len();
    let mut mean = vec![0.0; d];
    for s in samples {
        let s = s.as_ref();
        if s.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: s.len(),
            });
        }
        for (m, v) in mean.iter_mut().zip(s) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut std = vec![0.0; d];
    if n > 1 {
        for s in samples {
            for ((acc, v), m) in std.iter_mut().zip(s.as_ref()).zip(&mean) {
                *acc += (v - m) * (v - m);
            }
        }
        std.iter_mut()
            .for_each(|v| *v = (*v / (n - 1) as f64).sqrt());
    }
    Ok((mean, std))
}

/// One row of the reference matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterRepresentative {
    pub class_label: usize,
    pub cluster_index: usize,
    pub support: usize,
    pub intervals: Vec<Interval>,
}

impl ClusterRepresentative {
    pub fn dim(&self) -> usize {
        self.intervals.len()
    }
}

pub fn make_representative<R: AsRef<[f64]>>(
    samples: &[R],
    class_label: usize,
    cluster_index: usize,
) -> Result<ClusterRepresentative> {
    let (mean, std) = cluster_stats(samples)?;
    Ok(ClusterRepresentative {
        class_label,
        cluster_index,
        support: samples.len(),
        intervals: mean
            .iter()
            .zip(&std)
            .map(|(&m, &s)| Interval::around(m, s))
            .collect(),
    })
}

/// The trained model: `k` representatives per class, class-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceMatrix {
    representatives: Vec<ClusterRepresentative>,
    class_names: Vec<String>,
    k: usize,
    d: usize,
}

impl ReferenceMatrix {
    pub fn new(
        representatives: Vec<ClusterRepresentative>,
        class_names: Vec<String>,
        k: usize,
    ) -> Result<Self> {
        let m = class_names.len();
        if k == 0 || m == 0 {
            return Err(Error::Format(
                "reference matrix needs k >= 1 and m >= 1".into(),
            ));
        }
        if representatives.len() != k * m {
            return Err(Error::Format(format!(
                "expected {} representatives (k={k}, m={m}), found {}",
                k * m,
                representatives.len()
            )));
        }
        let d = representatives[0].dim();
        for (idx, rep) in representatives.iter().enumerate() {
            let (class, cluster) = (idx / k, idx % k);
            if rep.class_label != class || rep.cluster_index != cluster {
                return Err(Error::Format(format!(
                    "representative {idx} is ({}, {}), expected ({class}, {cluster})",
                    rep.class_label, rep.cluster_index
                )));
            }
            if rep.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: rep.dim(),
                });
            }
            if let Some(iv) = rep
                .intervals
                .iter()
                .find(|iv| iv.lo.is_nan() || iv.hi.is_nan() || iv.lo > iv.hi)
            {
                return Err(Error::Format(format!(
                    "representative {idx} has reversed interval [{}, {}]",
                    iv.lo, iv.hi
                )));
            }
        }
        Ok(Self {
            representatives,
            class_names,
            k,
            d,
        })
    }

    pub fn representatives(&self) -> &[ClusterRepresentative] {
        &self.representatives
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Columns: `class_label,cluster_index,support,lo_1,hi_1,...,lo_d,hi_d`.
    /// The class label column carries the class name.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = crate::files::csv_writer(path, true)?;
        let mut header = vec![
            "class_label".to_string(),
            "cluster_index".into(),
            "support".into(),
        ];
        for l in 1..=self.d {
            header.push(format!("lo_{l}"));
            header.push(format!("hi_{l}"));
        }
        w.write_record(&header)?;
        for rep in &self.representatives {
            let mut rec = vec![
                self.class_names[rep.class_label].clone(),
                rep.cluster_index.to_string(),
                rep.support.to_string(),
            ];
            for iv in &rep.intervals {
                rec.push(iv.lo.to_string());
                rec.push(iv.hi.to_string());
            }
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Class indices follow the order in which class names first appear.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut r = crate::files::csv_reader(path)?;
        let header_len = r.headers()?.len();
        if header_len < 5 || (header_len - 3) % 2 != 0 {
            return Err(Error::Format(format!(
                "{}: model header has {header_len} columns",
                path.display()
            )));
        }
        let d = (header_len - 3) / 2;
        let mut class_names: Vec<String> = Vec::new();
        let mut reps = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let bad = |what: &str| Error::Format(format!("model row {i}: bad {what}"));
            let name = rec[0].to_string();
            let class_label = match class_names.iter().position(|n| *n == name) {
                Some(c) => c,
                None => {
                    class_names.push(name);
                    class_names.len() - 1
                }
            };
            let cluster_index = rec[1].trim().parse().map_err(|_| bad("cluster_index"))?;
            let support = rec[2].trim().parse().map_err(|_| bad("support"))?;
            let mut intervals = Vec::with_capacity(d);
            for l in 0..d {
                let lo: f64 = rec[3 + 2 * l]
                    .trim()
                    .parse()
                    .map_err(|_| bad("lower bound"))?;
                let hi: f64 = rec[4 + 2 * l]
                    .trim()
                    .parse()
                    .map_err(|_| bad("upper bound"))?;
                intervals.push(Interval::new(lo, hi)?);
            }
            reps.push(ClusterRepresentative {
                class_label,
                cluster_index,
                support,
                intervals,
            });
        }
        if reps.is_empty() {
            return Err(Error::Format(format!(
                "{}: model has no rows",
                path.display()
            )));
        }
        let k = reps.iter().filter(|r| r.class_label == 0).count();
        Self::new(reps, class_names, k)
    }
}

/// A reference matrix together with the normalizer fitted on its training
/// rows. On disk the normalizer lives next to the model file as
/// `<stem>.normalizer.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub reference: ReferenceMatrix,
    pub normalizer: crate::imaging::Normalizer,
}

impl TrainedModel {
    /// Fit the normalizer on raw `train` features and build the reference
    /// matrix from the normalized rows.
    pub fn fit(train: &FeatureTable, k: usize, kmeans: &KMeans, seed: u64) -> Result<Self> {
        let normalizer = crate::imaging::Normalizer::fit(&train.rows)?;
        let normalized = train.map_rows(|r| normalizer.apply(r))?;
        let reference = build_reference(&normalized, k, kmeans, seed)?;
        Ok(Self {
            reference,
            normalizer,
        })
    }

    pub fn normalizer_path(model: &Path) -> std::path::PathBuf {
        let stem = model.file_stem().unwrap_or_default().to_string_lossy();
        model.with_file_name(format!("{stem}.normalizer.csv"))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.reference.write_csv(path)?;
        self.normalizer.write_csv(&Self::normalizer_path(path))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let reference = ReferenceMatrix::read_csv(path)?;
        let normalizer = crate::imaging::Normalizer::read_csv(&Self::normalizer_path(path))?;
        if normalizer.dim() != reference.dim() {
            return Err(Error::DimensionMismatch {
                expected: reference.dim(),
                actual: normalizer.dim(),
            });
        }
        Ok(Self {
            reference,
            normalizer,
        })
    }

    /// Normalize a raw feature vector and classify it.
    pub fn classify_raw(&self, raw: &[f64]) -> Result<crate::classify::ClassificationOutcome> {
        let sample = self.normalizer.apply(raw)?;
        crate::classify::classify(&sample, &self.reference)
    }
}

/// Cluster every class with K-means and summarise each cluster as intervals.
///
/// Class `c` is clustered with seed `seed + c`.
pub fn build_reference(
    train: &FeatureTable,
    k: usize,
    kmeans: &KMeans,
    seed: u64,
) -> Result<ReferenceMatrix> {
    let counts = train.class_counts();
    for (c, &n) in counts.iter().enumerate() {
        if n < k {
            return Err(Error::InsufficientSamples {
                class: train.class_names[c].clone(),
                required: k,
                available: n,
            });
        }
    }
    let mut reps = Vec::with_capacity(k * train.num_classes());
    for class in 0..train.num_classes() {
        let members: Vec<&Vec<f64>> = train
            .class_indices(class)
            .into_iter()
            .map(|i| &train.rows[i])
            .collect();
        let clusters = kmeans.fit(&members, k, seed.wrapping_add(class as u64))?;
        for j in 0..k {
            let samples: Vec<&Vec<f64>> = clusters
                .members(j)
                .into_iter()
                .map(|i| members[i])
                .collect();
            reps.push(make_representative(&samples, class, j)?);
        }
    }
    ReferenceMatrix::new(reps, train.class_names.clone(), k)
}
