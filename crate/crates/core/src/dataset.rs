//! Labeled feature matrices and their CSV persistence.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};

/// Labeled `n x d` feature matrix. Labels index into `class_names`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub paths: Vec<String>,
}

impl FeatureTable {
    pub fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        paths: Vec<String>,
    ) -> Result<Self> {
        let n = rows.len();
        if labels.len() != n || paths.len() != n {
            return Err(Error::Format(format!(
                "{n} rows but {} labels and {} paths",
                labels.len(),
                paths.len()
            )));
        }
        if let Some(first) = rows.first() {
            let d = first.len();
            for (i, r) in rows.iter().enumerate() {
                if r.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        actual: r.len(),
                    });
                }
                if let Some(j) = r.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::Format(format!(
                "label {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        Ok(Self {
            rows,
            labels,
            class_names,
            paths,
        })
    }

    /// Rows without paths, e.g. for synthetic fixtures.
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<usize>, num_classes: usize) -> Result<Self> {
        let paths = (0..rows.len()).map(|i| format!("#{i}")).collect();
        let class_names = (0..num_classes).map(|c| format!("class{c}")).collect();
        Self::new(rows, labels, class_names, paths)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Row indices belonging to `class`, in table order.
    pub fn class_indices(&self, class: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.labels[i] == class)
            .collect()
    }

    /// Sub-table with the given rows, keeping the class list intact.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
            paths: indices.iter().map(|&i| self.paths[i].clone()).collect(),
        }
    }

    /// Re-index labels against `names`, which must contain every current class.
    pub fn with_class_names(mut self, names: &[String]) -> Self {
        let remap: Vec<usize> = self
            .class_names
            .iter()
            .map(|n| {
                names
                    .iter()
                    .position(|m| m == n)
                    .expect("class present in target list")
            })
            .collect();
        self.labels.iter_mut().for_each(|l| *l = remap[*l]);
        self.class_names = names.to_vec();
        self
    }

    pub fn map_rows(&self, f: impl Fn(&[f64]) -> Result<Vec<f64>>) -> Result<Self> {
        Ok(Self {
            rows: self.rows.iter().map(|r| f(r)).collect::<Result<_>>()?,
            ..self.clone()
        })
    }

    /// Header `f0..f{d-1},label,path`, one row per sample.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = crate::files::csv_writer(path, true)?;
        let mut header: Vec<String> = (0..self.dim()).map(|j| format!("f{j}")).collect();
        header.push("label".into());
        header.push("path".into());
        w.write_record(&header)?;
        for i in 0..self.len() {
            let mut rec: Vec<String> = self.rows[i].iter().map(f64::to_string).collect();
            rec.push(self.class_names[self.labels[i]].clone());
            rec.push(self.paths[i].clone());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Inverse of [`write_csv`](Self::write_csv). Class indices follow the
    /// lexicographic order of the label strings.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut r = crate::files::csv_reader(path)?;
        let header = r.headers()?.clone();
        if header.len() < 3
            || &header[header.len() - 2] != "label"
            || &header[header.len() - 1] != "path"
        {
            return Err(Error::Format(format!(
                "{}: header must end with label,path",
                path.display()
            )));
        }
        let d = header.len() - 2;
        let mut rows = Vec::new();
        let mut names = Vec::new();
        let mut paths = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let row = (0..d)
                .map(|j| {
                    rec[j].trim().parse::<f64>().map_err(|_| {
                        Error::Format(format!(
                            "row {i}, column {j}: '{}' is not a number",
                            &rec[j]
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
            names.push(rec[d].to_string());
            paths.push(rec[d + 1].to_string());
        }
        let class_names: Vec<String> = names
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let labels = names
            .iter()
            .map(|n| class_names.binary_search(n).expect("name present"))
            .collect();
        Self::new(rows, labels, class_names, paths)
    }
}
