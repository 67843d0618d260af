//! Silhouette values over a precomputed dissimilarity matrix.
//!
//! For object `i` in cluster `C`, `a(i)` is the mean dissimilarity to the
//! other members of `C` and `b(i)` the smallest mean dissimilarity to the
//! members of any other cluster (the neighbor). Then
//! `s(i) = (b - a) / max(a, b)`, with `s = 0` for members of singleton
//! clusters and whenever `a = b = 0`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::data::CategoricalDataset;
use crate::dissim::{DissimMatrix, Precision};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectSilhouette {
    pub cluster: usize,
    pub a: f64,
    pub b: f64,
    pub s: f64,
    pub neighbor: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SilhouetteReport {
    pub per_object: Vec<ObjectSilhouette>,
    pub average: f64,
}

impl SilhouetteReport {
    /// CSV with columns `object_id,cluster,a,b,s,neighbor`.
    pub fn write_csv<W: Write>(&self, mut out: W, ds: Option<&CategoricalDataset>, precision: Precision) -> Result<()> {
        writeln!(out, "object_id,cluster,a,b,s,neighbor")?;
        for (i, o) in self.per_object.iter().enumerate() {
            let id = ds.map_or_else(|| i.to_string(), |ds| ds.object_label(i));
            writeln!(
                out,
                "{},{},{},{},{},{}",
                csv_field(&id),
                o.cluster,
                precision.format(o.a),
                precision.format(o.b),
                precision.format(o.s),
                o.neighbor
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Per-object silhouettes of the clustering `labels` (values in `0..k`).
pub fn silhouette_values(matrix: &DissimMatrix, labels: &[usize], k: usize) -> Result<SilhouetteReport> {
    let n = matrix.order();
    if labels.len() != n {
        return Err(Error::Shape(format!(
            "{} labels for a matrix of order {n}",
            labels.len()
        )));
    }
    if k < 2 {
        return Err(Error::Config(format!("silhouettes need k >= 2, got {k}")));
    }
    let mut sizes = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        if l >= k {
            return Err(Error::Index(format!("object {i} has label {l} >= k = {k}")));
        }
        sizes[l] += 1;
    }
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(Error::Config("silhouettes need at least two nonempty clusters".into()));
    }

    let per_object: Vec<ObjectSilhouette> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut sums = vec![0.0; k];
            for (j, &d) in matrix.row(i).iter().enumerate() {
                sums[labels[j]] += d;
            }
            let own = labels[i];
            let a = if sizes[own] > 1 {
                sums[own] / (sizes[own] - 1) as f64
            } else {
                0.0
            };
            let (neighbor, b) = (0..k)
                .filter(|&l| l != own && sizes[l] > 0)
                .map(|l| (l, sums[l] / sizes[l] as f64))
                .fold(
                    (usize::MAX, f64::INFINITY),
                    |acc, (l, d)| if d < acc.1 { (l, d) } else { acc },
                );
            let s = if sizes[own] == 1 {
                0.0
            } else {
                let scale = a.max(b);
                if scale == 0.0 {
                    0.0
                } else {
                    (b - a) / scale
                }
            };
            ObjectSilhouette {
                cluster: own,
                a,
                b,
                s,
                neighbor,
            }
        })
        .collect();
    let average = per_object.iter().map(|o| o.s).sum::<f64>() / n as f64;
    Ok(SilhouetteReport { per_object, average })
}

/// Mean silhouette of the clustering.
pub fn average_silhouette(matrix: &DissimMatrix, labels: &[usize], k: usize) -> Result<f64> {
    silhouette_values(matrix, labels, k).map(|r| r.average)
}
