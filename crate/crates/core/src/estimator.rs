//! Sweep over candidate cluster counts and selection of the best one.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::CategoricalDataset;
use crate::dissim::{pairwise_matrix, DissimMatrix, Measure};
use crate::engine::{pick_best, run_restarts, Algorithm, ClusteringConfig};
use crate::error::{Error, Result};
use crate::silhouette::{silhouette_values, SilhouetteReport};

/// Which restart represents a given `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestartSelection {
    /// Smallest clustering objective.
    #[default]
    Objective,
    /// Largest average silhouette.
    Silhouette,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub algorithm: Algorithm,
    pub k_min: usize,
    pub k_max: usize,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
    pub selection: RestartSelection,
}

impl SweepConfig {
    /// Largest `k` of the default range.
    pub const DEFAULT_K_MAX: usize = 10;

    /// Default configuration for `n` objects: `k` from 2 to `min(10, n - 1)`.
    pub fn for_objects(algorithm: Algorithm, n: usize) -> Self {
        SweepConfig {
            algorithm,
            k_min: 2,
            k_max: Self::DEFAULT_K_MAX.min(n.saturating_sub(1)),
            max_iters: ClusteringConfig::DEFAULT_MAX_ITERS,
            restarts: ClusteringConfig::DEFAULT_RESTARTS,
            seed: 0,
            selection: RestartSelection::Objective,
        }
    }

    pub fn clustering(&self, k: usize) -> ClusteringConfig {
        ClusteringConfig {
            algorithm: self.algorithm,
            k,
            max_iters: self.max_iters,
            restarts: self.restarts,
            seed: self.seed,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k_min < 2 {
            return Err(Error::Config(format!("k_min must be at least 2, got {}", self.k_min)));
        }
        if self.k_min > self.k_max {
            return Err(Error::Config(format!(
                "k_min ({}) must not exceed k_max ({})",
                self.k_min, self.k_max
            )));
        }
        if self.k_max + 1 > n {
            return Err(Error::Config(format!(
                "k_max ({}) must be at most n - 1 = {}",
                self.k_max,
                n as i64 - 1
            )));
        }
        self.clustering(self.k_min).validate(n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub k: usize,
    pub avg_silhouette: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip)]
    pub labels: Vec<usize>,
    #[serde(skip)]
    pub silhouette: SilhouetteReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub k_min: usize,
    pub k_max: usize,
    pub measure: Measure,
    pub entries: Vec<SweepEntry>,
    pub k_opt: usize,
    /// `k` with the second-largest average silhouette.
    pub k_second: Option<usize>,
}

impl SweepResult {
    pub fn entry(&self, k: usize) -> Option<&SweepEntry> {
        self.entries.iter().find(|e| e.k == k)
    }

    /// CSV of `(k, avg_silhouette)` in increasing `k`.
    pub fn write_curve_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,avg_silhouette")?;
        for e in &self.entries {
            writeln!(out, "{},{:e}", e.k, e.avg_silhouette)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// The `k` whose silhouette is largest; the smallest such `k` on ties.
pub fn select_k(entries: &[(usize, f64)]) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &(k, s) in entries {
        match best {
            Some((bk, bs)) if s < bs || (s == bs && k >= bk) => {}
            _ => best = Some((k, s)),
        }
    }
    best.map(|(k, _)| k)
        .ok_or_else(|| Error::Input("cannot select k from an empty list".into()))
}

/// Clusters `ds` for every `k` in `[k_min, k_max]` and picks the `k` with the
/// largest average silhouette.
///
/// The pairwise matrix is computed once, with the algorithm's silhouette
/// measure, and shared by every `k`.
pub fn sweep(ds: &CategoricalDataset, cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate(ds.n())?;
    let matrix = pairwise_matrix(ds, cfg.algorithm.silhouette_measure());
    sweep_with_matrix(ds, &matrix, cfg)
}

/// As [`sweep`], with a caller-supplied matrix.
pub fn sweep_with_matrix(ds: &CategoricalDataset, matrix: &DissimMatrix, cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate(ds.n())?;
    if matrix.order() != ds.n() {
        return Err(Error::Shape(format!(
            "matrix of order {} for {} objects",
            matrix.order(),
            ds.n()
        )));
    }
    let entries = (cfg.k_min..=cfg.k_max)
        .into_par_iter()
        .map(|k| sweep_entry(ds, matrix, cfg, k))
        .collect::<Result<Vec<_>>>()?;

    let scores: Vec<(usize, f64)> = entries.iter().map(|e| (e.k, e.avg_silhouette)).collect();
    let k_opt = select_k(&scores)?;
    let rest: Vec<(usize, f64)> = scores.iter().copied().filter(|&(k, _)| k != k_opt).collect();
    let k_second = select_k(&rest).ok();
    Ok(SweepResult {
        k_min: cfg.k_min,
        k_max: cfg.k_max,
        measure: matrix.measure().unwrap_or(cfg.algorithm.silhouette_measure()),
        entries,
        k_opt,
        k_second,
    })
}

fn sweep_entry(ds: &CategoricalDataset, matrix: &DissimMatrix, cfg: &SweepConfig, k: usize) -> Result<SweepEntry> {
    let runs = run_restarts(ds, &cfg.clustering(k))?;
    let (winner, silhouette) = match cfg.selection {
        RestartSelection::Objective => {
            let idx = pick_best(runs.iter().map(|r| r.objective), true).expect("restarts >= 1");
            let rep = silhouette_values(matrix, runs[idx].labels(), k)?;
            (idx, rep)
        }
        RestartSelection::Silhouette => {
            let reports = runs
                .iter()
                .map(|r| silhouette_values(matrix, r.labels(), k))
                .collect::<Result<Vec<_>>>()?;
            let idx = pick_best(reports.iter().map(|r| r.average), false).expect("restarts >= 1");
            (idx, reports.into_iter().nth(idx).expect("index in range"))
        }
    };
    let run = &runs[winner];
    Ok(SweepEntry {
        k,
        avg_silhouette: silhouette.average,
        objective: run.objective,
        iterations: run.iterations,
        converged: run.converged,
        labels: run.labels().to_vec(),
        silhouette,
    })
}
