use std::hash::{DefaultHasher, Hash, Hasher};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Disjoint train / test row indices, each sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl Split {
    /// Stable digest of the partition, used to check that models share splits.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

/// Number of training samples drawn from a class of `n` at `fraction`.
pub fn train_count(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).floor() as usize).clamp(1, n.saturating_sub(1).max(1))
}

/// Seeded stratified split: each class contributes `floor(fraction * n)`
/// (at least one) samples to training and the rest to testing.
pub fn stratified_split(
    labels: &[usize],
    num_classes: usize,
    fraction: f64,
    seed: u64,
) -> Result<Split> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {fraction} must lie in (0, 1)"
        )));
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
    for (i, &l) in labels.iter().enumerate() {
        if l >= num_classes {
            return Err(Error::InvalidArgument(format!("label {l} out of range")));
        }
        by_class[l].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, mut idx) in by_class.into_iter().enumerate() {
        if idx.len() < 2 {
            return Err(Error::InsufficientSamples {
                class: format!("#{class}"),
                required: 2,
                available: idx.len(),
            });
        }
        idx.shuffle(&mut rng);
        let n_train = train_count(idx.len(), fraction);
        train.extend_from_slice(&idx[..n_train]);
        test.extend_from_slice(&idx[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventy_percent_of_ten() {
        let labels = vec![0; 10];
        let s = stratified_split(&labels, 1, 0.7, 3).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (7, 3));
        assert_eq!(s, stratified_split(&labels, 1, 0.7, 3).unwrap());
    }

    #[test]
    fn tiny_classes() {
        assert!(stratified_split(&[0, 1, 1], 2, 0.5, 0).is_err());
        let s = stratified_split(&[0, 0, 1, 1], 2, 0.2, 0).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (2, 2));
        assert!(stratified_split(&[0, 0], 1, 1.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn partition_is_disjoint_and_complete(
            labels in prop::collection::vec(0usize..3, 6..80),
            fraction in 0.05f64..0.95,
            seed: u64,
        ) {
            prop_assume!((0..3).all(|c| labels.iter().filter(|&&l| l == c).count() >= 2));
            let s = stratified_split(&labels, 3, fraction, seed).unwrap();
            let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
            for c in 0..3 {
                let n = labels.iter().filter(|&&l| l == c).count();
                let got = s.train.iter().filter(|&&i| labels[i] == c).count();
                prop_assert_eq!(got, train_count(n, fraction));
                prop_assert!(got >= 1 && got < n);
            }
        }
    }
}
