//! Lloyd's K-means with seeded restarts and empty-cluster repair.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    /// `k` distinct samples drawn uniformly.
    #[default]
    RandomSamples,
    /// D^2-weighted seeding.
    #[serde(rename = "kmeans++")]
    KMeansPlusPlus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KMeans {
    pub max_iter: usize,
    pub tol: f64,
    pub init: Init,
    /// Independent initializations; the run with the lowest SSE is kept.
    pub n_init: usize,
}

impl Default for KMeans {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-6,
            init: Init::RandomSamples,
            n_init: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub sse: f64,
    pub iterations: usize,
    /// SSE after each iteration; non-increasing.
    pub sse_history: Vec<f64>,
}

impl ClusteringResult {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == cluster)
            .collect()
    }
}

#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = squared_distance(point, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

pub fn sse<R: AsRef<[f64]>>(points: &[R], assignments: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .map(|(p, &a)| squared_distance(p.as_ref(), &centroids[a]))
        .sum()
}

fn validate<R: AsRef<[f64]>>(points: &[R], k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if points.is_empty() {
        return Err(Error::Empty("no points to cluster".into()));
    }
    if k > points.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the number of points ({})",
            points.len()
        )));
    }
    let d = points[0].as_ref().len();
    if d == 0 {
        return Err(Error::InvalidArgument("points have no features".into()));
    }
    for (i, p) in points.iter().enumerate() {
        let p = p.as_ref();
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: p.len(),
            });
        }
        if let Some(j) = p.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: j });
        }
    }
    Ok(d)
}

impl KMeans {
    pub fn fit<R: AsRef<[f64]>>(
        &self,
        points: &[R],
        k: usize,
        seed: u64,
    ) -> Result<ClusteringResult> {
        validate(points, k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<ClusteringResult> = None;
        for _ in 0..self.n_init.max(1) {
            let init = match self.init {
                Init::RandomSamples => sample(&mut rng, points.len(), k)
                    .into_iter()
                    .map(|i| points[i].as_ref().to_vec())
                    .collect(),
                Init::KMeansPlusPlus => plus_plus(points, k, &mut rng),
            };
            let run = self.run(points, init)?;
            if best.as_ref().is_none_or(|b| run.sse < b.sse) {
                best = Some(run);
            }
        }
        Ok(best.expect("at least one run"))
    }

    /// Run from explicit starting centroids.
    pub fn fit_from<R: AsRef<[f64]>>(
        &self,
        points: &[R],
        initial: Vec<Vec<f64>>,
    ) -> Result<ClusteringResult> {
        let d = validate(points, initial.len())?;
        if let Some(c) = initial.iter().find(|c| c.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: c.len(),
            });
        }
        self.run(points, initial)
    }

    fn run<R: AsRef<[f64]>>(
        &self,
        points: &[R],
        mut centroids: Vec<Vec<f64>>,
    ) -> Result<ClusteringResult> {
        let k = centroids.len();
        let d = centroids[0].len();
        let n = points.len();
        let mut assignments = vec![0usize; n];
        let mut history = Vec::new();
        let mut iterations = 0;

        loop {
            iterations += 1;
            let mut dist = vec![0.0; n];
            for (i, p) in points.iter().enumerate() {
                (assignments[i], dist[i]) = nearest(p.as_ref(), &centroids);
            }
            repair_empty(&mut assignments, &mut dist, k);

            let mut next = vec![vec![0.0; d]; k];
            let mut counts = vec![0usize; k];
            for (p, &a) in points.iter().zip(&assignments) {
                counts[a] += 1;
                for (acc, v) in next[a].iter_mut().zip(p.as_ref()) {
                    *acc += v;
                }
            }
            for (c, &cnt) in next.iter_mut().zip(&counts) {
                let cnt = cnt as f64;
                c.iter_mut().for_each(|v| *v /= cnt);
            }

            let shift = centroids
                .iter()
                .zip(&next)
                .map(|(a, b)| squared_distance(a, b).sqrt())
                .fold(0.0, f64::max);
            centroids = next;
            history.push(sse(points, &assignments, &centroids));

            if shift < self.tol || iterations >= self.max_iter.max(1) {
                break;
            }
        }

        Ok(ClusteringResult {
            sse: *history.last().expect("at least one iteration"),
            assignments,
            centroids,
            iterations,
            sse_history: history,
        })
    }
}

/// Give every empty cluster the point farthest from its current centroid,
/// taken from a cluster that keeps at least one member.
fn repair_empty(assignments: &mut [usize], dist: &mut [f64], k: usize) {
    let mut counts = vec![0usize; k];
    for &a in assignments.iter() {
        counts[a] += 1;
    }
    for empty in 0..k {
        if counts[empty] > 0 {
            continue;
        }
        let donor = (0..assignments.len())
            .filter(|&i| counts[assignments[i]] > 1)
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if dist[b] >= dist[i] => Some(b),
                _ => Some(i),
            })
            .expect("k <= n guarantees a donor");
        counts[assignments[donor]] -= 1;
        assignments[donor] = empty;
        counts[empty] = 1;
        dist[donor] = 0.0;
    }
}

fn plus_plus<R: AsRef<[f64]>>(points: &[R], k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p.as_ref(), points[chosen[0]].as_ref()))
        .collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 && target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            // all remaining points coincide with chosen centroids
            (0..n).find(|i| !chosen.contains(i)).expect("k <= n")
        };
        chosen.push(next);
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(squared_distance(p.as_ref(), points[next].as_ref()));
        }
    }
    chosen
        .into_iter()
        .map(|i| points[i].as_ref().to_vec())
        .collect()
}

/// `k` rows of centroids, one per line, for debugging dumps.
pub fn write_centroids_csv(centroids: &[Vec<f64>], path: &std::path::Path) -> Result<()> {
    let mut w = crate::files::csv_writer(path, false)?;
    for c in centroids {
        w.write_record(c.iter().map(f64::to_string))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
