//! Clustering of categorical data with silhouette-based selection of the
//! number of clusters.
//!
//! The pipeline is: load or synthesize a [`CategoricalDataset`], build the
//! pairwise [`DissimMatrix`], cluster for every candidate `k` with
//! [`cluster_best_of`], score each clustering with [`average_silhouette`] and
//! keep the `k` with the largest score ([`sweep`]).

pub mod centers;
pub mod data;
pub mod discretize;
pub mod dissim;
pub mod engine;
pub mod error;
pub mod estimator;
pub mod fixtures;
pub mod manifest;
pub mod silhouette;
pub mod synth;

pub use centers::{
    bandwidth, kernel_value, mode_center, object_center_distance, probabilistic_center, Bandwidth, CenterKind,
    CenterValues, ClusterCenter,
};
pub use data::{load_csv, load_csv_with, AttributeDomain, CategoricalDataset, Code, CsvOptions, FrequencyTable};
pub use discretize::{discretize_numeric, load_numeric_csv, Discretized, GradeLabels, NumericTable};
pub use dissim::{lin_dsim_attr, object_dsim, pairwise_matrix, simple_match, DissimMatrix, Measure, Precision};
pub use engine::{
    assign, cluster_best_of, cluster_once, objective, update_centers, Algorithm, ClusteringConfig, ClusteringResult,
    Partition,
};
pub use error::{Error, Result};
pub use estimator::{select_k, sweep, RestartSelection, SweepConfig, SweepEntry, SweepResult};
pub use silhouette::{average_silhouette, silhouette_values, ObjectSilhouette, SilhouetteReport};
pub use synth::{generate_synthetic, SyntheticParams};
