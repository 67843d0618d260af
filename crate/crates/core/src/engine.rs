//! Alternating assignment/update clustering.
//!
//! A run seeds `k` centers at distinct random objects, then alternates
//! between assigning every object to its nearest center and recomputing the
//! centers from the new clusters, until an assignment pass moves no object or
//! `max_iters` passes have been made. The objective is the total distance of
//! objects to their assigned centers.
//!
//! Distribution centers (k-SCC, k-SCC+) are compared to objects with the
//! expected information-theoretic dissimilarity; mode centers (k-modes) with
//! simple matching.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::centers::{mode_center, probabilistic_center, CenterKind, CenterValues, ClusterCenter};
use crate::data::CategoricalDataset;
use crate::dissim::{AttributeDissim, Measure};
use crate::error::{Error, Result};

/// Clustering algorithm; fixes the center kind and the measures used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Probabilistic centers, information-theoretic distances and silhouettes.
    Kscc,
    /// As `Kscc`, but silhouettes are computed on the simple-matching matrix.
    KsccPlus,
    /// Mode centers with simple matching throughout.
    Kmodes,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Kscc => "kscc",
            Algorithm::KsccPlus => "kscc-plus",
            Algorithm::Kmodes => "kmodes",
        }
    }

    pub fn center_kind(self) -> CenterKind {
        match self {
            Algorithm::Kscc | Algorithm::KsccPlus => CenterKind::Probabilistic,
            Algorithm::Kmodes => CenterKind::Mode,
        }
    }

    /// Measure of the pairwise matrix that scores this algorithm's clusterings.
    pub fn silhouette_measure(self) -> Measure {
        match self {
            Algorithm::Kscc => Measure::InformationTheoretic,
            Algorithm::KsccPlus | Algorithm::Kmodes => Measure::SimpleMatching,
        }
    }

    fn seed_center(self, row: &[u32]) -> ClusterCenter {
        match self.center_kind() {
            CenterKind::Mode => ClusterCenter::mode_at(row),
            _ => ClusterCenter::point_mass(row),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClusteringConfig {
    pub algorithm: Algorithm,
    pub k: usize,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl ClusteringConfig {
    pub const DEFAULT_MAX_ITERS: usize = 100;
    pub const DEFAULT_RESTARTS: usize = 100;

    pub fn new(algorithm: Algorithm, k: usize) -> Self {
        ClusteringConfig {
            algorithm,
            k,
            max_iters: Self::DEFAULT_MAX_ITERS,
            restarts: Self::DEFAULT_RESTARTS,
            seed: 0,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Config(format!("k must be at least 2, got {}", self.k)));
        }
        if self.k > n {
            return Err(Error::Config(format!(
                "k = {} exceeds the number of objects ({n})",
                self.k
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be positive".into()));
        }
        Ok(())
    }
}

/// Hard assignment of each object to one of `k` clusters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
    sizes: Vec<usize>,
}

impl Partition {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        let mut sizes = vec![0; k];
        for (i, &l) in labels.iter().enumerate() {
            if l >= k {
                return Err(Error::Index(format!("object {i} has label {l} >= k = {k}")));
            }
            sizes[l] += 1;
        }
        Ok(Partition { labels, k, sizes })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Member indices of every cluster, in increasing object order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub partition: Partition,
    pub centers: Vec<ClusterCenter>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seed_used: u64,
}

impl ClusteringResult {
    pub fn labels(&self) -> &[usize] {
        self.partition.labels()
    }

    pub fn to_json(&self, ds: &CategoricalDataset) -> Value {
        json!({
            "labels": self.partition.labels(),
            "centers": self.centers.iter().map(|c| c.to_json(ds)).collect::<Vec<_>>(),
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed_used,
        })
    }
}

/// Per-center lookup table: expected dissimilarity between every category of
/// every attribute and the center's value there. Turns an object-center
/// distance into `m` table lookups.
struct CenterProfile {
    values: Vec<f64>,
}

/// Shared state for repeated assignment passes over one dataset.
struct Clusterer<'a> {
    ds: &'a CategoricalDataset,
    lin: Option<AttributeDissim>,
    offsets: Vec<usize>,
}

impl<'a> Clusterer<'a> {
    fn new(ds: &'a CategoricalDataset, needs_lin: bool) -> Self {
        let mut offsets = Vec::with_capacity(ds.m() + 1);
        let mut acc = 0;
        for d in ds.domains() {
            offsets.push(acc);
            acc += d.cardinality();
        }
        offsets.push(acc);
        Clusterer {
            ds,
            lin: needs_lin.then(|| AttributeDissim::new(ds, Measure::InformationTheoretic)),
            offsets,
        }
    }

    fn for_centers(ds: &'a CategoricalDataset, centers: &[ClusterCenter]) -> Self {
        let needs_lin = centers
            .iter()
            .any(|c| matches!(c.values(), CenterValues::Distribution(_)));
        Self::new(ds, needs_lin)
    }

    fn profile(&self, center: &ClusterCenter) -> CenterProfile {
        let mut values = vec![0.0; *self.offsets.last().unwrap_or(&0)];
        for j in 0..self.ds.m() {
            let card = self.ds.domain(j).cardinality();
            let slot = &mut values[self.offsets[j]..self.offsets[j] + card];
            match center.values() {
                CenterValues::Distribution(dist) => {
                    let lin = self.lin.as_ref().expect("distribution centers need the Lin table");
                    for (x, v) in slot.iter_mut().enumerate() {
                        *v = dist[j].iter().map(|&(o, p)| p * lin.get(j, x as u32, o)).sum();
                    }
                }
                CenterValues::Modes(modes) => {
                    for (x, v) in slot.iter_mut().enumerate() {
                        *v = f64::from(u8::from(x as u32 != modes[j]));
                    }
                }
            }
        }
        CenterProfile { values }
    }

    #[inline]
    fn distance(&self, i: usize, profile: &CenterProfile) -> f64 {
        self.ds
            .row(i)
            .iter()
            .zip(&self.offsets)
            .map(|(&c, &off)| profile.values[off + c as usize])
            .sum()
    }

    /// Nearest-center assignment followed by empty-cluster repair.
    fn assign(&self, centers: &[ClusterCenter]) -> Partition {
        let n = self.ds.n();
        let k = centers.len();
        let profiles: Vec<CenterProfile> = centers.iter().map(|c| self.profile(c)).collect();
        let mut labels = Vec::with_capacity(n);
        let mut own_dist = Vec::with_capacity(n);
        let mut sizes = vec![0usize; k];
        for i in 0..n {
            let (best, d) = profiles
                .iter()
                .enumerate()
                .map(|(l, p)| (l, self.distance(i, p)))
                .fold((0, f64::INFINITY), |acc, (l, d)| if d < acc.1 { (l, d) } else { acc });
            labels.push(best);
            own_dist.push(d);
            sizes[best] += 1;
        }

        // Reseed each empty cluster with the object farthest from its own
        // center, taken from a cluster that can spare it.
        for l in 0..k {
            if sizes[l] > 0 {
                continue;
            }
            let donor = (0..n)
                .filter(|&i| sizes[labels[i]] > 1)
                .fold(None, |best: Option<usize>, i| match best {
                    Some(b) if own_dist[b] >= own_dist[i] => Some(b),
                    _ => Some(i),
                });
            let Some(i) = donor else { break };
            sizes[labels[i]] -= 1;
            labels[i] = l;
            sizes[l] = 1;
            own_dist[i] = 0.0;
        }
        Partition { labels, k, sizes }
    }

    fn objective(&self, partition: &Partition, centers: &[ClusterCenter]) -> f64 {
        let profiles: Vec<CenterProfile> = centers.iter().map(|c| self.profile(c)).collect();
        partition
            .labels()
            .iter()
            .enumerate()
            .map(|(i, &l)| self.distance(i, &profiles[l]))
            .sum()
    }
}

/// Labels every object with its nearest center (ties to the lowest index),
/// then repairs empty clusters by moving the object farthest from its center
/// into each of them.
pub fn assign(ds: &CategoricalDataset, centers: &[ClusterCenter]) -> Result<Partition> {
    if centers.len() < 2 {
        return Err(Error::Config(format!(
            "assignment needs at least 2 centers, got {}",
            centers.len()
        )));
    }
    check_centers(ds, centers)?;
    Ok(Clusterer::for_centers(ds, centers).assign(centers))
}

fn check_centers(ds: &CategoricalDataset, centers: &[ClusterCenter]) -> Result<()> {
    for c in centers {
        if c.m() != ds.m() {
            return Err(Error::Shape(format!(
                "center has {} attributes, dataset has {}",
                c.m(),
                ds.m()
            )));
        }
        for j in 0..ds.m() {
            let card = ds.domain(j).cardinality() as u32;
            if c.support(j).iter().any(|&o| o >= card) {
                return Err(Error::Index(format!("center category outside domain of attribute {j}")));
            }
        }
    }
    Ok(())
}

/// One center per cluster of `partition`.
pub fn update_centers(ds: &CategoricalDataset, partition: &Partition, kind: CenterKind) -> Result<Vec<ClusterCenter>> {
    if partition.len() != ds.n() {
        return Err(Error::Shape(format!(
            "partition labels {} objects, dataset has {}",
            partition.len(),
            ds.n()
        )));
    }
    partition
        .clusters()
        .iter()
        .map(|members| match kind {
            CenterKind::Probabilistic => probabilistic_center(ds, members),
            CenterKind::Mode => mode_center(ds, members),
            CenterKind::PointMass => Err(Error::Config(
                "point-mass centers are seeds only and cannot be updated".into(),
            )),
        })
        .collect()
}

/// Total distance from every object to its assigned center.
pub fn objective(ds: &CategoricalDataset, partition: &Partition, centers: &[ClusterCenter]) -> Result<f64> {
    if partition.len() != ds.n() || partition.k() != centers.len() {
        return Err(Error::Shape(format!(
            "{} labels / {} clusters against {} objects / {} centers",
            partition.len(),
            partition.k(),
            ds.n(),
            centers.len()
        )));
    }
    check_centers(ds, centers)?;
    Ok(Clusterer::for_centers(ds, centers).objective(partition, centers))
}

fn run_once(clusterer: &Clusterer<'_>, cfg: &ClusteringConfig, seed: u64) -> Result<ClusteringResult> {
    let ds = clusterer.ds;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<ClusterCenter> = sample(&mut rng, ds.n(), cfg.k)
        .into_iter()
        .map(|i| cfg.algorithm.seed_center(ds.row(i)))
        .collect();

    let kind = cfg.algorithm.center_kind();
    let mut current: Option<Partition> = None;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        let next = clusterer.assign(&centers);
        if current.as_ref() == Some(&next) {
            converged = true;
            break;
        }
        centers = update_centers(ds, &next, kind)?;
        current = Some(next);
    }
    let partition = current.expect("max_iters >= 1 guarantees one pass");
    let objective = clusterer.objective(&partition, &centers);
    Ok(ClusteringResult {
        partition,
        centers,
        objective,
        iterations,
        converged,
        seed_used: seed,
    })
}

/// One seeded run of the alternating loop. The `k` seed objects are drawn
/// without replacement by a ChaCha8 generator seeded with `seed`.
pub fn cluster_once(ds: &CategoricalDataset, cfg: &ClusteringConfig, seed: u64) -> Result<ClusteringResult> {
    cfg.validate(ds.n())?;
    let clusterer = Clusterer::new(ds, cfg.algorithm.center_kind() != CenterKind::Mode);
    run_once(&clusterer, cfg, seed)
}

/// Seed of restart `r` derived from the base seed.
pub fn restart_seed(base: u64, r: usize) -> u64 {
    base ^ r as u64
}

/// Every restart of `cfg`, in restart order. Restarts run in parallel.
pub fn run_restarts(ds: &CategoricalDataset, cfg: &ClusteringConfig) -> Result<Vec<ClusteringResult>> {
    cfg.validate(ds.n())?;
    let clusterer = Clusterer::new(ds, cfg.algorithm.center_kind() != CenterKind::Mode);
    (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_once(&clusterer, cfg, restart_seed(cfg.seed, r)))
        .collect()
}

/// Index of the first maximum of `score` (first minimum when `minimize`).
pub(crate) fn pick_best(scores: impl IntoIterator<Item = f64>, minimize: bool) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.into_iter().enumerate() {
        let better = match best {
            None => true,
            Some((_, b)) => {
                if minimize {
                    s < b
                } else {
                    s > b
                }
            }
        };
        if better {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

/// Runs `cfg.restarts` seeded restarts and keeps the one with the smallest
/// objective (earliest restart on ties).
pub fn cluster_best_of(ds: &CategoricalDataset, cfg: &ClusteringConfig) -> Result<ClusteringResult> {
    let mut runs = run_restarts(ds, cfg)?;
    let best = pick_best(runs.iter().map(|r| r.objective), true).expect("restarts >= 1");
    Ok(runs.swap_remove(best))
}
