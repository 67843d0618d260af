//! Planted-partition generator for categorical benchmarks.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::data::CategoricalDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyntheticParams {
    pub n: usize,
    pub m: usize,
    pub k_true: usize,
    pub cats_per_attr: usize,
    pub noise_rate: f64,
    pub seed: u64,
}

impl SyntheticParams {
    fn validate(&self) -> Result<()> {
        if self.k_true < 2 {
            return Err(Error::Config(format!("k_true must be at least 2, got {}", self.k_true)));
        }
        if self.cats_per_attr < self.k_true {
            return Err(Error::Config(format!(
                "cats_per_attr ({}) must be at least k_true ({})",
                self.cats_per_attr, self.k_true
            )));
        }
        if !(0.0..1.0).contains(&self.noise_rate) {
            return Err(Error::Config(format!(
                "noise_rate must lie in [0, 1), got {}",
                self.noise_rate
            )));
        }
        if self.m == 0 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        if self.n < self.k_true {
            return Err(Error::Config(format!(
                "n ({}) must be at least k_true ({})",
                self.n, self.k_true
            )));
        }
        Ok(())
    }
}

/// Draws `k_true` prototype rows and copies them into `n` objects, perturbing
/// each cell with probability `noise_rate`.
///
/// At every attribute the prototypes take `k_true` distinct categories, so
/// any two prototypes differ everywhere. Object `i` belongs to cluster
/// `i % k_true`, which keeps cluster sizes within one of each other. Noisy
/// cells are redrawn uniformly from all `cats_per_attr` categories.
///
/// The generator is ChaCha8 seeded with `seed`; the output is a pure function
/// of the parameters.
pub fn generate_synthetic(params: &SyntheticParams) -> Result<(CategoricalDataset, Vec<usize>)> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let k = params.k_true;

    // prototypes[l][j]
    let mut prototypes = vec![vec![0u32; params.m]; k];
    #[allow(clippy::needless_range_loop)]
    for j in 0..params.m {
        let picks = sample(&mut rng, params.cats_per_attr, k);
        for (l, cat) in picks.into_iter().enumerate() {
            prototypes[l][j] = cat as u32;
        }
    }

    let labels: Vec<usize> = (0..params.n).map(|i| i % k).collect();
    let rows: Vec<Vec<u32>> = labels
        .iter()
        .map(|&l| {
            prototypes[l]
                .iter()
                .map(|&c| {
                    if params.noise_rate > 0.0 && rng.gen_bool(params.noise_rate) {
                        rng.gen_range(0..params.cats_per_attr as u32)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let ds = CategoricalDataset::from_records(
        rows.iter()
            .map(|r| r.iter().map(|c| format!("c{c}")).collect::<Vec<_>>()),
    )?;
    Ok((ds, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn params(n: usize, k: usize, noise: f64, seed: u64) -> SyntheticParams {
        SyntheticParams {
            n,
            m: 5,
            k_true: k,
            cats_per_attr: 6,
            noise_rate: noise,
            seed,
        }
    }

    #[test]
    fn zero_noise_copies_prototypes() {
        let (ds, labels) = generate_synthetic(&params(30, 3, 0.0, 7)).unwrap();
        for i in 0..ds.n() {
            for i2 in 0..ds.n() {
                if labels[i] == labels[i2] {
                    assert_eq!(ds.row(i), ds.row(i2));
                } else {
                    // prototypes differ at every attribute
                    assert!(ds.row(i).iter().zip(ds.row(i2)).all(|(a, b)| a != b));
                }
            }
        }
        let distinct: HashSet<&[u32]> = ds.rows().collect();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn balanced_labels() {
        let (_, labels) = generate_synthetic(&params(4, 2, 0.0, 1)).unwrap();
        let ones = labels.iter().filter(|&&l| l == 1).count();
        assert_eq!((labels.len() - ones, ones), (2, 2));
    }

    #[test]
    fn deterministic() {
        let a = generate_synthetic(&params(50, 4, 0.2, 99)).unwrap();
        let b = generate_synthetic(&params(50, 4, 0.2, 99)).unwrap();
        assert_eq!(a.1, b.1);
        assert!(a.0.rows().eq(b.0.rows()));
        let c = generate_synthetic(&params(50, 4, 0.2, 100)).unwrap();
        assert!(!a.0.rows().eq(c.0.rows()) || a.1 != c.1);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(generate_synthetic(&params(10, 1, 0.0, 0)).is_err());
        assert!(generate_synthetic(&params(10, 7, 0.0, 0)).is_err());
        assert!(generate_synthetic(&params(10, 2, 1.0, 0)).is_err());
        assert!(generate_synthetic(&params(10, 2, -0.1, 0)).is_err());
        assert!(generate_synthetic(&params(1, 2, 0.0, 0)).is_err());
    }
}
