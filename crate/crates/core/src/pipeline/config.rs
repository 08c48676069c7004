use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clustering::{Init, KMeans};
use crate::error::{Error, Result};
use crate::imaging::{FeatureConfig, ZernikeOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// Interval representatives + acceptance-count classifier.
    #[serde(rename = "proposed")]
    Proposed,
    /// 1-NN on every training sample.
    #[serde(rename = "model1")]
    NearestNeighbor,
    /// 1-NN on per-class K-means centroids.
    #[serde(rename = "model2")]
    ClusterMean,
}

impl ModelKind {
    pub fn title(&self) -> &'static str {
        match self {
            ModelKind::Proposed => "Symbolic + Clustering (proposed)",
            ModelKind::NearestNeighbor => "Conventional (Model-1)",
            ModelKind::ClusterMean => "Conventional + Clustering (Model-2)",
        }
    }

    pub fn uses_k(&self) -> bool {
        !matches!(self, ModelKind::NearestNeighbor)
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Proposed => "proposed",
            ModelKind::NearestNeighbor => "model1",
            ModelKind::ClusterMean => "model2",
        })
    }
}

/// Every tunable of an experiment, read from a flat `key = value` file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub train_fractions: Vec<f64>,
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub models: Vec<ModelKind>,

    /// Directory with one sub-directory per class.
    pub corpus_dir: Option<PathBuf>,
    /// Used when `corpus_dir` is unset.
    pub synthetic_per_class: usize,
    pub synthetic_seed: u64,
    pub cache_dir: Option<PathBuf>,

    pub resize_width: usize,
    pub resize_height: usize,
    pub grid_cols: usize,
    pub grid_rows: usize,
    pub filter_sigma: f64,
    pub filter_size: usize,
    pub zernike_orders: Vec<[u32; 2]>,

    pub kmeans_max_iter: usize,
    pub kmeans_tol: f64,
    pub kmeans_init: Init,
    pub kmeans_n_init: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let f = FeatureConfig::default();
        let km = KMeans::default();
        Self {
            train_fractions: vec![0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8],
            k_values: (2..=10).collect(),
            trials: 20,
            seed: 0,
            models: vec![
                ModelKind::Proposed,
                ModelKind::NearestNeighbor,
                ModelKind::ClusterMean,
            ],
            corpus_dir: None,
            synthetic_per_class: 60,
            synthetic_seed: 1,
            cache_dir: None,
            resize_width: f.resize_width,
            resize_height: f.resize_height,
            grid_cols: f.grid_cols,
            grid_rows: f.grid_rows,
            filter_sigma: f.filter_sigma,
            filter_size: f.filter_size,
            zernike_orders: f.zernike_orders.iter().map(|o| [o.n, o.m]).collect(),
            kmeans_max_iter: km.max_iter,
            kmeans_tol: km.tol,
            kmeans_init: km.init,
            kmeans_n_init: km.n_init,
        }
    }
}

/// Conventional upper bound for the cluster sweep.
pub const DEFAULT_MAX_K: usize = 10;

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load and resolve relative paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.corpus_dir, &mut cfg.cache_dir]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.train_fractions.is_empty() {
            return Err(Error::Config("train_fractions is empty".into()));
        }
        if let Some(f) = self
            .train_fractions
            .iter()
            .find(|f| !(**f > 0.0 && **f < 1.0))
        {
            return Err(Error::Config(format!(
                "train fraction {f} must lie in (0, 1)"
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return Err(Error::Config(
                "k_values must be non-empty and positive".into(),
            ));
        }
        if self.models.is_empty() {
            return Err(Error::Config("no models selected".into()));
        }
        if self.corpus_dir.is_none() && self.synthetic_per_class == 0 {
            return Err(Error::Config(
                "set corpus_dir or synthetic_per_class".into(),
            ));
        }
        if self.kmeans_n_init == 0 {
            return Err(Error::Config("kmeans_n_init must be at least 1".into()));
        }
        if self.kmeans_tol.is_nan() || self.kmeans_tol < 0.0 {
            return Err(Error::Config("kmeans_tol must be non-negative".into()));
        }
        if let Some(k) = self.k_values.iter().find(|&&k| k > DEFAULT_MAX_K) {
            log::warn!("k = {k} exceeds the usual sweep bound of {DEFAULT_MAX_K}");
        }
        self.feature_config().validate()
    }

    pub fn feature_config(&self) -> FeatureConfig {
        FeatureConfig {
            resize_width: self.resize_width,
            resize_height: self.resize_height,
            grid_cols: self.grid_cols,
            grid_rows: self.grid_rows,
            filter_sigma: self.filter_sigma,
            filter_size: self.filter_size,
            zernike_orders: self
                .zernike_orders
                .iter()
                .map(|&[n, m]| ZernikeOrder { n, m })
                .collect(),
        }
    }

    pub fn kmeans(&self) -> KMeans {
        KMeans {
            max_iter: self.kmeans_max_iter,
            tol: self.kmeans_tol,
            init: self.kmeans_init,
            n_init: self.kmeans_n_init,
        }
    }
}
