//! Dissimilarity between categories and between objects.
//!
//! Two measures are supported: simple matching (0 on equal categories, 1
//! otherwise) and an information-theoretic measure derived from Lin's
//! similarity, under which a mismatch between rare categories costs more than
//! one between common categories:
//!
//! ```text
//! dsim_j(a, b) = 1 - 2 ln f({a, b}) / (ln f(a) + ln f(b))      (a != b)
//! ```
//!
//! where `f(a)` is the relative frequency of `a` in column `j` and `f({a, b})`
//! the fraction of objects whose value is either `a` or `b`. Object
//! dissimilarity sums the per-attribute values.

use std::cell::Cell;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{CategoricalDataset, Code};
use crate::error::{Error, Result};

/// Choice of per-attribute dissimilarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    SimpleMatching,
    InformationTheoretic,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::SimpleMatching => "simple-matching",
            Measure::InformationTheoretic => "information-theoretic",
        }
    }
}

/// Simple matching: 0 when the categories agree, 1 otherwise.
#[inline]
pub fn simple_match(a: Code, b: Code) -> u32 {
    u32::from(a != b)
}

/// Lin-derived dissimilarity from raw counts. `count_a` and `count_b` must
/// both be positive.
fn lin_from_counts(count_a: usize, count_b: usize, n: usize) -> f64 {
    let n = n as f64;
    let fa = count_a as f64 / n;
    let fb = count_b as f64 / n;
    let fab = (count_a + count_b) as f64 / n;
    1.0 - 2.0 * fab.ln() / (fa.ln() + fb.ln())
}

/// Information-theoretic dissimilarity of categories `a` and `b` at attribute
/// `j`. Both categories must occur in the column.
pub fn lin_dsim_attr(ds: &CategoricalDataset, j: usize, a: Code, b: Code) -> Result<f64> {
    if j >= ds.m() {
        return Err(Error::Index(format!("attribute {j} >= m = {}", ds.m())));
    }
    let (ca, cb) = (ds.count(j, a), ds.count(j, b));
    if ca == 0 {
        return Err(Error::UnobservedCategory { attr: j, category: a });
    }
    if cb == 0 {
        return Err(Error::UnobservedCategory { attr: j, category: b });
    }
    if a == b {
        return Ok(0.0);
    }
    Ok(lin_from_counts(ca, cb, ds.n()))
}

/// Dissimilarity of objects `i` and `i2`: the per-attribute dissimilarities
/// summed over all attributes.
pub fn object_dsim(ds: &CategoricalDataset, i: usize, i2: usize, measure: Measure) -> Result<f64> {
    if i >= ds.n() || i2 >= ds.n() {
        return Err(Error::Index(format!("object pair ({i}, {i2}) with n = {}", ds.n())));
    }
    let (x, y) = (ds.row(i), ds.row(i2));
    match measure {
        Measure::SimpleMatching => Ok(x.iter().zip(y).map(|(&a, &b)| simple_match(a, b)).sum::<u32>() as f64),
        Measure::InformationTheoretic => {
            let mut total = 0.0;
            for (j, (&a, &b)) in x.iter().zip(y).enumerate() {
                total += lin_dsim_attr(ds, j, a, b)?;
            }
            Ok(total)
        }
    }
}

/// Precomputed per-attribute dissimilarity between every pair of categories
/// of a dataset.
#[derive(Debug, Clone)]
pub struct AttributeDissim {
    measure: Measure,
    /// One `card x card` row-major table per attribute; empty for simple
    /// matching.
    tables: Vec<Vec<f64>>,
    cards: Vec<usize>,
}

impl AttributeDissim {
    pub fn new(ds: &CategoricalDataset, measure: Measure) -> Self {
        let cards: Vec<usize> = ds.domains().iter().map(|d| d.cardinality()).collect();
        let tables = match measure {
            Measure::SimpleMatching => Vec::new(),
            Measure::InformationTheoretic => cards
                .iter()
                .enumerate()
                .map(|(j, &card)| {
                    let mut t = vec![0.0; card * card];
                    for a in 0..card {
                        for b in (a + 1)..card {
                            let v = lin_from_counts(ds.count(j, a as Code), ds.count(j, b as Code), ds.n());
                            t[a * card + b] = v;
                            t[b * card + a] = v;
                        }
                    }
                    t
                })
                .collect(),
        };
        AttributeDissim { measure, tables, cards }
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn cardinality(&self, j: usize) -> usize {
        self.cards[j]
    }

    #[inline]
    pub fn get(&self, j: usize, a: Code, b: Code) -> f64 {
        match self.measure {
            Measure::SimpleMatching => simple_match(a, b) as f64,
            Measure::InformationTheoretic => self.tables[j][a as usize * self.cards[j] + b as usize],
        }
    }

    /// Dissimilarity of two code rows.
    pub fn rows(&self, x: &[Code], y: &[Code]) -> f64 {
        x.iter().zip(y).enumerate().map(|(j, (&a, &b))| self.get(j, a, b)).sum()
    }
}

thread_local! {
    static MATRIX_BUILDS: Cell<u64> = const { Cell::new(0) };
}

/// Number of [`pairwise_matrix`] evaluations started on the current thread.
pub fn matrix_builds_on_this_thread() -> u64 {
    MATRIX_BUILDS.with(Cell::get)
}

/// Symmetric n x n matrix of object dissimilarities with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimMatrix {
    n: usize,
    values: Vec<f64>,
    measure: Option<Measure>,
}

impl DissimMatrix {
    /// Wraps a dense row-major matrix. Checks shape, symmetry, zero diagonal
    /// and nonnegativity.
    pub fn from_dense(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Shape(format!("{} values for an order-{n} matrix", values.len())));
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::Input(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let v = values[i * n + j];
                if v != values[j * n + i] {
                    return Err(Error::Input(format!("asymmetric entry ({i}, {j})")));
                }
                if v.is_nan() || v < 0.0 {
                    return Err(Error::Input(format!("entry ({i}, {j}) = {v} is not >= 0")));
                }
            }
        }
        Ok(DissimMatrix {
            n,
            values,
            measure: None,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn measure(&self) -> Option<Measure> {
        self.measure
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Returns the matrix with every entry multiplied by `c`.
    pub fn scaled(&self, c: f64) -> DissimMatrix {
        DissimMatrix {
            n: self.n,
            values: self.values.iter().map(|v| v * c).collect(),
            measure: self.measure,
        }
    }

    /// Writes the matrix as headerless CSV, one row per object.
    pub fn write_csv<W: Write>(&self, mut out: W, precision: Precision) -> Result<()> {
        let mut line = String::new();
        for i in 0..self.n {
            line.clear();
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                precision.push(&mut line, *v);
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Number formatting for exported matrices and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    /// Four decimals.
    #[default]
    Display,
    /// Shortest scientific notation that round-trips to the same f64.
    Full,
}

impl Precision {
    pub fn push(self, buf: &mut String, v: f64) {
        use std::fmt::Write as _;
        match self {
            Precision::Display => write!(buf, "{v:.4}"),
            Precision::Full => write!(buf, "{v:e}"),
        }
        .expect("writing to a String cannot fail");
    }

    pub fn format(self, v: f64) -> String {
        let mut s = String::new();
        self.push(&mut s, v);
        s
    }
}

/// Dissimilarity between every pair of objects. Only the upper triangle is
/// evaluated; rows are processed in parallel on the current rayon pool.
pub fn pairwise_matrix(ds: &CategoricalDataset, measure: Measure) -> DissimMatrix {
    MATRIX_BUILDS.with(|c| c.set(c.get() + 1));
    let table = AttributeDissim::new(ds, measure);
    let n = ds.n();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = ds.row(i);
            ((i + 1)..n).map(|j| table.rows(x, ds.row(j))).collect()
        })
        .collect();
    let mut values = vec![0.0; n * n];
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    DissimMatrix {
        n,
        values,
        measure: Some(measure),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn code(ds: &CategoricalDataset, j: usize, label: &str) -> Code {
        ds.domain(j).code_of(label).unwrap()
    }

    #[test]
    fn simple_match_cases() {
        assert_eq!(simple_match(3, 3), 0);
        assert_eq!(simple_match(3, 4), 1);
        assert_eq!(simple_match(4, 3), 1);
    }

    #[test]
    fn lin_attr_cases() {
        let ds = fixtures::worked_example();
        let v = lin_dsim_attr(&ds, 2, code(&ds, 2, "c3"), code(&ds, 2, "e3")).unwrap();
        assert!((v - 0.3845).abs() < 1e-4, "{v}");
        let a5 = code(&ds, 4, "a5");
        let c5 = code(&ds, 4, "c5");
        assert_eq!(lin_dsim_attr(&ds, 4, a5, a5).unwrap(), 0.0);
        assert_eq!(lin_dsim_attr(&ds, 4, a5, c5).unwrap(), 1.0);
        assert!(matches!(
            lin_dsim_attr(&ds, 4, a5, 7),
            Err(Error::UnobservedCategory { attr: 4, category: 7 })
        ));
    }

    #[test]
    fn object_dsim_cases() {
        let ds = fixtures::worked_example();
        let lin = Measure::InformationTheoretic;
        assert_eq!(object_dsim(&ds, 7, 8, lin).unwrap(), 0.0);
        assert!((object_dsim(&ds, 1, 2, lin).unwrap() - 1.4872).abs() < 1e-4);
        assert!((object_dsim(&ds, 2, 9, lin).unwrap() - 0.8917).abs() < 1e-4);
        assert_eq!(object_dsim(&ds, 0, 1, Measure::SimpleMatching).unwrap(), 6.0);
        assert!(object_dsim(&ds, 0, 10, lin).is_err());
    }

    #[test]
    fn duplicates_give_zero_matrix() {
        let ds = CategoricalDataset::from_code_rows(vec![vec![1, 2, 3]; 4]).unwrap();
        for measure in [Measure::SimpleMatching, Measure::InformationTheoretic] {
            let mat = pairwise_matrix(&ds, measure);
            assert!(mat.as_slice().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn log_base_invariance() {
        let ds = fixtures::worked_example();
        for j in 0..ds.m() {
            let card = ds.domain(j).cardinality() as Code;
            for a in 0..card {
                for b in 0..card {
                    if a == b {
                        continue;
                    }
                    let n = ds.n() as f64;
                    let (fa, fb) = (ds.count(j, a) as f64 / n, ds.count(j, b) as f64 / n);
                    let fab = fa + fb;
                    let base10 = 1.0 - 2.0 * fab.log10() / (fa.log10() + fb.log10());
                    let natural = lin_dsim_attr(&ds, j, a, b).unwrap();
                    assert!((base10 - natural).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn matrix_formatting() {
        let ds = fixtures::worked_example();
        let mat = pairwise_matrix(&ds, Measure::InformationTheoretic);
        let mut out = Vec::new();
        mat.write_csv(&mut out, Precision::Display).unwrap();
        let text = String::from_utf8(out).unwrap();
        let row4: Vec<&str> = text.lines().nth(3).unwrap().split(',').collect();
        assert_eq!(row4[3], "0.0000");
        assert_eq!(row4[6], "0.3845");

        let mut full = Vec::new();
        mat.write_csv(&mut full, Precision::Full).unwrap();
        let text = String::from_utf8(full).unwrap();
        for (i, line) in text.lines().enumerate() {
            for (j, cell) in line.split(',').enumerate() {
                assert_eq!(cell.parse::<f64>().unwrap(), mat.get(i, j));
            }
        }
    }

    #[test]
    fn from_dense_validates() {
        assert!(DissimMatrix::from_dense(2, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
        assert!(DissimMatrix::from_dense(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DissimMatrix::from_dense(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(DissimMatrix::from_dense(2, vec![0.0; 3]).is_err());
    }

    fn dataset_strategy() -> impl Strategy<Value = CategoricalDataset> {
        (1usize..5, 1usize..5).prop_flat_map(|(m, cats)| {
            prop::collection::vec(prop::collection::vec(0u32..cats as u32 + 1, m), 2..25)
                .prop_map(|rows| CategoricalDataset::from_code_rows(rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn per_attribute_lin_in_unit_interval(ds in dataset_strategy()) {
            for j in 0..ds.m() {
                let card = ds.domain(j).cardinality() as Code;
                for a in 0..card {
                    for b in 0..card {
                        let v = lin_dsim_attr(&ds, j, a, b).unwrap();
                        prop_assert!((0.0..=1.0).contains(&v), "{v}");
                        if a != b {
                            let f = ds.count(j, a) as f64;
                            let g = ds.count(j, b) as f64;
                            prop_assert!((f + g) * (f + g) > f * g);
                            prop_assert!(v > 0.0);
                        }
                    }
                }
            }
        }

        #[test]
        fn matrix_matches_pairwise_oracle(ds in dataset_strategy()) {
            for measure in [Measure::SimpleMatching, Measure::InformationTheoretic] {
                let mat = pairwise_matrix(&ds, measure);
                for i in 0..ds.n() {
                    prop_assert_eq!(mat.get(i, i), 0.0);
                    for j in 0..ds.n() {
                        let direct = object_dsim(&ds, i, j, measure).unwrap();
                        prop_assert!((mat.get(i, j) - direct).abs() < 1e-12);
                        prop_assert_eq!(mat.get(i, j), mat.get(j, i));
                        prop_assert!(mat.get(i, j) <= ds.m() as f64 + 1e-12);
                        let identical = ds.row(i) == ds.row(j);
                        prop_assert_eq!(identical, mat.get(i, j) == 0.0);
                    }
                }
            }
        }

        #[test]
        fn hamming_is_mismatch_count(ds in dataset_strategy()) {
            for i in 0..ds.n() {
                for j in 0..ds.n() {
                    let d = object_dsim(&ds, i, j, Measure::SimpleMatching).unwrap();
                    let count = ds.row(i).iter().zip(ds.row(j)).filter(|(a, b)| a != b).count();
                    prop_assert_eq!(d, count as f64);
                }
            }
        }
    }
}
