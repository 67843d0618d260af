//! Cluster representatives.
//!
//! A probabilistic center holds, for every attribute, a smoothed distribution
//! over the categories observed in the cluster. The smoothing follows the
//! Aitchison-Aitken kernel with a single bandwidth per cluster chosen by
//! least-squares cross-validation; the kernel estimate collapses to
//!
//! ```text
//! P(o) = lambda / |O_l| + (1 - lambda) * f_l(o)      for o observed in the cluster
//! ```
//!
//! with `|O_l|` the number of distinct categories the cluster shows at that
//! attribute. Mode centers (k-modes) keep the most frequent category instead.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::data::{CategoricalDataset, Code};
use crate::dissim::{lin_dsim_attr, simple_match};
use crate::error::{Error, Result};

/// Kernel bandwidth of one cluster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bandwidth {
    /// Cross-validation value before clamping; `+inf` when every attribute's
    /// frequencies are already uniform but not all pure.
    pub raw: f64,
    /// `min(raw, 1)`.
    pub effective: f64,
}

impl Bandwidth {
    pub const ZERO: Bandwidth = Bandwidth {
        raw: 0.0,
        effective: 0.0,
    };

    fn from_raw(raw: f64) -> Self {
        Bandwidth {
            raw,
            effective: raw.min(1.0),
        }
    }

    fn to_json(self) -> Value {
        let raw = if self.raw.is_finite() {
            json!(self.raw)
        } else {
            json!("inf")
        };
        json!({ "raw": raw, "effective": self.effective })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterKind {
    Probabilistic,
    PointMass,
    Mode,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CenterValues {
    /// Per attribute, `(category, probability)` over the support in
    /// increasing category order.
    Distribution(Vec<Vec<(Code, f64)>>),
    /// Per attribute, the modal category.
    Modes(Vec<Code>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterCenter {
    kind: CenterKind,
    values: CenterValues,
    bandwidth: Option<Bandwidth>,
}

impl ClusterCenter {
    /// Distribution putting probability 1 on the categories of `row`.
    pub fn point_mass(row: &[Code]) -> Self {
        ClusterCenter {
            kind: CenterKind::PointMass,
            values: CenterValues::Distribution(row.iter().map(|&c| vec![(c, 1.0)]).collect()),
            bandwidth: None,
        }
    }

    /// Mode center equal to `row`.
    pub fn mode_at(row: &[Code]) -> Self {
        ClusterCenter {
            kind: CenterKind::Mode,
            values: CenterValues::Modes(row.to_vec()),
            bandwidth: None,
        }
    }

    pub fn kind(&self) -> CenterKind {
        self.kind
    }

    pub fn values(&self) -> &CenterValues {
        &self.values
    }

    pub fn bandwidth(&self) -> Option<Bandwidth> {
        self.bandwidth
    }

    pub fn m(&self) -> usize {
        match &self.values {
            CenterValues::Distribution(d) => d.len(),
            CenterValues::Modes(v) => v.len(),
        }
    }

    /// Probability of category `o` at attribute `j`. A mode center puts all
    /// mass on its mode.
    pub fn probability(&self, j: usize, o: Code) -> f64 {
        match &self.values {
            CenterValues::Distribution(d) => d[j].iter().find(|(c, _)| *c == o).map_or(0.0, |(_, p)| *p),
            CenterValues::Modes(v) => f64::from(u8::from(v[j] == o)),
        }
    }

    /// Categories carrying probability at attribute `j`.
    pub fn support(&self, j: usize) -> Vec<Code> {
        match &self.values {
            CenterValues::Distribution(d) => d[j].iter().map(|(c, _)| *c).collect(),
            CenterValues::Modes(v) => vec![v[j]],
        }
    }

    /// JSON view with category labels from `ds`.
    pub fn to_json(&self, ds: &CategoricalDataset) -> Value {
        let attributes: Vec<Value> = (0..self.m())
            .map(|j| {
                let domain = ds.domain(j);
                let name = ds.header().map_or_else(|| j.to_string(), |h| h[j].clone());
                let label = |c: Code| domain.label(c).unwrap_or("?").to_owned();
                match &self.values {
                    CenterValues::Distribution(d) => {
                        let probs: Map<String, Value> = d[j].iter().map(|&(c, p)| (label(c), json!(p))).collect();
                        json!({ "attribute": name, "probabilities": probs })
                    }
                    CenterValues::Modes(v) => json!({ "attribute": name, "mode": label(v[j]) }),
                }
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("kind".into(), serde_json::to_value(self.kind).expect("enum"));
        if let Some(bw) = self.bandwidth {
            obj.insert("bandwidth".into(), bw.to_json());
        }
        obj.insert("attributes".into(), Value::Array(attributes));
        Value::Object(obj)
    }
}

/// Aitchison-Aitken kernel over a domain of `domain_size` categories.
pub fn kernel_value(domain_size: usize, is_match: bool, lambda: f64) -> f64 {
    let size = domain_size as f64;
    if is_match {
        1.0 - lambda * (size - 1.0) / size
    } else {
        lambda / size
    }
}

/// Per-attribute `(support, counts)` of the members.
fn member_counts(ds: &CategoricalDataset, members: &[usize], j: usize) -> Vec<(Code, u64)> {
    let mut counts = vec![0u64; ds.domain(j).cardinality()];
    for &i in members {
        counts[ds.code(i, j) as usize] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(o, c)| (o as Code, c))
        .collect()
}

fn check_members(ds: &CategoricalDataset, members: &[usize]) -> Result<()> {
    if members.is_empty() {
        return Err(Error::DegenerateCluster);
    }
    if let Some(&i) = members.iter().find(|&&i| i >= ds.n()) {
        return Err(Error::Index(format!("object {i} >= n = {}", ds.n())));
    }
    Ok(())
}

/// Least-squares cross-validation bandwidth of the cluster formed by
/// `members`:
///
/// ```text
/// raw = 1/(n_l - 1) * sum_j (1 - sum_o f_l(o)^2) / sum_j (sum_o f_l(o)^2 - 1/|O_l_j|)
/// ```
///
/// Singletons get 0. A zero numerator (every attribute pure) gives 0 and a
/// zero denominator with a positive numerator gives `+inf`. Zero tests are
/// done on integer counts so they are exact.
pub fn bandwidth(ds: &CategoricalDataset, members: &[usize]) -> Result<Bandwidth> {
    check_members(ds, members)?;
    let n_l = members.len() as u64;
    if n_l == 1 {
        return Ok(Bandwidth::ZERO);
    }
    let n_sq = (n_l * n_l) as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut num_zero = true;
    let mut den_zero = true;
    for j in 0..ds.m() {
        let counts = member_counts(ds, members, j);
        let card = counts.len() as u64;
        let sum_sq: u64 = counts.iter().map(|(_, c)| c * c).sum();
        // n_l^2 (1 - sum f^2) and n_l^2 |O| (sum f^2 - 1/|O|), both >= 0.
        let num_j = n_l * n_l - sum_sq;
        let den_j = card * sum_sq - n_l * n_l;
        num_zero &= num_j == 0;
        den_zero &= den_j == 0;
        num += num_j as f64 / n_sq;
        den += den_j as f64 / (n_sq * card as f64);
    }
    let raw = if num_zero {
        0.0
    } else if den_zero {
        f64::INFINITY
    } else {
        num / ((n_l - 1) as f64 * den)
    };
    Ok(Bandwidth::from_raw(raw))
}

/// Kernel-smoothed distribution center of `members`.
pub fn probabilistic_center(ds: &CategoricalDataset, members: &[usize]) -> Result<ClusterCenter> {
    let bw = bandwidth(ds, members)?;
    let lambda = bw.effective;
    let n_l = members.len() as f64;
    let dist = (0..ds.m())
        .map(|j| {
            let counts = member_counts(ds, members, j);
            let card = counts.len() as f64;
            counts
                .into_iter()
                .map(|(o, c)| (o, lambda / card + (1.0 - lambda) * (c as f64 / n_l)))
                .collect()
        })
        .collect();
    Ok(ClusterCenter {
        kind: CenterKind::Probabilistic,
        values: CenterValues::Distribution(dist),
        bandwidth: Some(bw),
    })
}

/// Most frequent category per attribute; ties go to the smallest code.
pub fn mode_center(ds: &CategoricalDataset, members: &[usize]) -> Result<ClusterCenter> {
    check_members(ds, members)?;
    let modes = (0..ds.m())
        .map(|j| {
            member_counts(ds, members, j)
                .into_iter()
                .fold((0, 0), |best, (o, c)| if c > best.1 { (o, c) } else { best })
                .0
        })
        .collect();
    Ok(ClusterCenter {
        kind: CenterKind::Mode,
        values: CenterValues::Modes(modes),
        bandwidth: None,
    })
}

/// Distance from object `i` to `center`.
///
/// Distribution centers use the expected information-theoretic dissimilarity
/// `sum_j sum_o P_j(o) dsim_j(x_ij, o)`; mode centers use simple matching.
pub fn object_center_distance(ds: &CategoricalDataset, i: usize, center: &ClusterCenter) -> Result<f64> {
    if i >= ds.n() {
        return Err(Error::Index(format!("object {i} >= n = {}", ds.n())));
    }
    if center.m() != ds.m() {
        return Err(Error::Shape(format!(
            "center has {} attributes, dataset has {}",
            center.m(),
            ds.m()
        )));
    }
    let row = ds.row(i);
    match &center.values {
        CenterValues::Distribution(dist) => {
            let mut total = 0.0;
            for (j, attr) in dist.iter().enumerate() {
                for &(o, p) in attr {
                    total += p * lin_dsim_attr(ds, j, row[j], o)?;
                }
            }
            Ok(total)
        }
        CenterValues::Modes(modes) => Ok(row.iter().zip(modes).map(|(&a, &b)| simple_match(a, b)).sum::<u32>() as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissim::{object_dsim, Measure};
    use crate::fixtures;

    #[test]
    fn pure_cluster_has_zero_bandwidth() {
        let ds = fixtures::worked_example();
        assert_eq!(bandwidth(&ds, &[7, 8]).unwrap(), Bandwidth::ZERO);
    }

    #[test]
    fn worked_bandwidth_clamps_to_one() {
        let ds = fixtures::worked_example();
        // x3, x8, x9: (1/2) * (16/9) / (2/9) = 4
        let bw = bandwidth(&ds, &[2, 7, 8]).unwrap();
        assert!((bw.raw - 4.0).abs() < 1e-12, "{}", bw.raw);
        assert_eq!(bw.effective, 1.0);
    }

    #[test]
    fn uniform_frequencies_diverge() {
        let ds = fixtures::worked_example();
        // x1 and x2 differ at every attribute
        let bw = bandwidth(&ds, &[0, 1]).unwrap();
        assert_eq!(bw.raw, f64::INFINITY);
        assert_eq!(bw.effective, 1.0);
    }

    #[test]
    fn singleton_and_empty() {
        let ds = fixtures::worked_example();
        assert_eq!(bandwidth(&ds, &[3]).unwrap(), Bandwidth::ZERO);
        assert!(matches!(bandwidth(&ds, &[]), Err(Error::DegenerateCluster)));
        assert!(matches!(probabilistic_center(&ds, &[]), Err(Error::DegenerateCluster)));
        assert!(matches!(mode_center(&ds, &[]), Err(Error::DegenerateCluster)));
    }

    #[test]
    fn kernel_cases() {
        assert_eq!(kernel_value(3, true, 0.0), 1.0);
        assert_eq!(kernel_value(3, false, 0.0), 0.0);
        assert_eq!(kernel_value(4, true, 1.0), 0.25);
        assert_eq!(kernel_value(4, false, 1.0), 0.25);
        assert_eq!(kernel_value(2, true, 0.5), 0.75);
        assert_eq!(kernel_value(2, false, 0.5), 0.25);
    }

    #[test]
    fn duplicate_cluster_center_is_point_mass() {
        let ds = fixtures::worked_example();
        let c = probabilistic_center(&ds, &[7, 8]).unwrap();
        for j in 0..ds.m() {
            assert_eq!(c.support(j), vec![ds.code(7, j)]);
            assert_eq!(c.probability(j, ds.code(7, j)), 1.0);
        }
    }

    #[test]
    fn smoothed_center_is_uniform_on_support() {
        let ds = fixtures::worked_example();
        let c = probabilistic_center(&ds, &[2, 7, 8]).unwrap();
        let c2 = ds.domain(1).code_of("c2").unwrap();
        let d2 = ds.domain(1).code_of("d2").unwrap();
        assert_eq!(c.probability(1, c2), 0.5);
        assert_eq!(c.probability(1, d2), 0.5);
        assert_eq!(c.probability(1, ds.domain(1).code_of("a2").unwrap()), 0.0);
        if let CenterValues::Distribution(d) = c.values() {
            for attr in d {
                let total: f64 = attr.iter().map(|(_, p)| p).sum();
                assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mode_center_cases() {
        let ds = fixtures::worked_example();
        let c = mode_center(&ds, &[1, 2, 9]).unwrap();
        let CenterValues::Modes(modes) = c.values() else {
            panic!("mode center expected")
        };
        let labels: Vec<&str> = modes
            .iter()
            .enumerate()
            .map(|(j, &o)| ds.domain(j).label(o).unwrap())
            .collect();
        // A3 is a three-way tie among a3, d3, b3; b3 occurs first in the file.
        assert_eq!(labels, vec!["d1", "d2", "b3", "b4", "c5", "a6"]);
        assert_eq!(ds.domain(2).code_of("b3").unwrap(), 0);

        let single = mode_center(&ds, &[4]).unwrap();
        assert_eq!(single.values(), &CenterValues::Modes(ds.row(4).to_vec()));
        let dup = mode_center(&ds, &[7, 8]).unwrap();
        assert_eq!(dup.values(), &CenterValues::Modes(ds.row(8).to_vec()));
    }

    #[test]
    fn distance_cases() {
        let ds = fixtures::worked_example();
        let own = ClusterCenter::point_mass(ds.row(5));
        assert_eq!(object_center_distance(&ds, 5, &own).unwrap(), 0.0);

        let at_x8 = ClusterCenter::point_mass(ds.row(7));
        let d = object_center_distance(&ds, 2, &at_x8).unwrap();
        assert!((d - 3.2191).abs() < 1e-4, "{d}");
        assert_eq!(d, object_dsim(&ds, 2, 7, Measure::InformationTheoretic).unwrap());

        let mode = ClusterCenter::mode_at(ds.row(7));
        assert_eq!(object_center_distance(&ds, 7, &mode).unwrap(), 0.0);
        assert_eq!(object_center_distance(&ds, 0, &mode).unwrap(), 3.0);
    }

    #[test]
    fn json_view() {
        let ds = fixtures::worked_example();
        let c = probabilistic_center(&ds, &[0, 1]).unwrap();
        let v = c.to_json(&ds);
        assert_eq!(v["kind"], "probabilistic");
        assert_eq!(v["bandwidth"]["raw"], "inf");
        assert_eq!(v["attributes"][0]["attribute"], "A1");
        assert_eq!(v["attributes"][0]["probabilities"]["a1"], 0.5);
        let m = mode_center(&ds, &[7, 8]).unwrap().to_json(&ds);
        assert_eq!(m["attributes"][5]["mode"], "c6");
    }
}
