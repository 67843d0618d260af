//! Equal-width discretization of numeric tables into ordinal grades.

use std::io::Read;

use crate::data::CategoricalDataset;
use crate::error::{Error, Result};

/// Labels for the five-grade scale, lowest first.
pub const LINGUISTIC_GRADES: [&str; 5] = ["very low", "low", "neither", "high", "very high"];

/// How grade categories are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradeLabels {
    /// `grade_1` .. `grade_<bins>`.
    #[default]
    Numbered,
    /// `very low` .. `very high`; only valid with five bins.
    Linguistic,
}

impl GradeLabels {
    fn label(self, grade: usize) -> String {
        match self {
            GradeLabels::Numbered => format!("grade_{grade}"),
            GradeLabels::Linguistic => LINGUISTIC_GRADES[grade - 1].to_owned(),
        }
    }
}

/// A dense table of numbers read from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

impl NumericTable {
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    fn column_name(&self, j: usize) -> String {
        match &self.header {
            Some(h) => format!("{} ({})", j + 1, h[j]),
            None => (j + 1).to_string(),
        }
    }
}

pub fn load_numeric_csv<R: Read>(source: R, has_header: bool) -> Result<NumericTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        match width {
            None => width = Some(rec.len()),
            Some(w) if w != rec.len() => {
                return Err(Error::RaggedRow {
                    line,
                    expected: w,
                    found: rec.len(),
                })
            }
            Some(_) => {}
        }
        if has_header && header.is_none() {
            header = Some(rec.iter().map(str::to_owned).collect());
            continue;
        }
        let row = rec
            .iter()
            .enumerate()
            .map(|(j, field)| {
                if field.is_empty() {
                    return Err(Error::MissingValue { line, column: j + 1 });
                }
                field.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("column {}: {field:?} is not a number ({e})", j + 1),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(NumericTable { header, rows })
}

/// Result of discretizing a numeric table.
#[derive(Debug, Clone)]
pub struct Discretized {
    pub dataset: CategoricalDataset,
    /// One message per constant column.
    pub warnings: Vec<String>,
}

/// Grade (1-based) of `x` on an equal-width scale over `[min, max]`. The
/// maximum falls in the top bin.
pub fn grade_of(x: f64, min: f64, max: f64, bins: usize) -> usize {
    if max <= min {
        return 1;
    }
    let width = (max - min) / bins as f64;
    let idx = ((x - min) / width).floor();
    (idx.max(0.0) as usize).min(bins - 1) + 1
}

/// Maps every column independently onto `bins` equal-width intervals spanning
/// the column's range.
pub fn discretize_numeric(table: &NumericTable, bins: usize, labels: GradeLabels) -> Result<Discretized> {
    if bins < 2 {
        return Err(Error::Config(format!("bins must be at least 2, got {bins}")));
    }
    if labels == GradeLabels::Linguistic && bins != LINGUISTIC_GRADES.len() {
        return Err(Error::Config(format!(
            "linguistic grade labels require exactly 5 bins, got {bins}"
        )));
    }
    if table.rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let width = table.width();
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); width];
    for (i, row) in table.rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::RaggedRow {
                line: i as u64 + 1,
                expected: width,
                found: row.len(),
            });
        }
        for (j, &x) in row.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::Input(format!(
                    "row {}, column {}: non-finite value {x}",
                    i + 1,
                    j + 1
                )));
            }
            let r = &mut ranges[j];
            r.0 = r.0.min(x);
            r.1 = r.1.max(x);
        }
    }

    let mut warnings = Vec::new();
    for (j, &(lo, hi)) in ranges.iter().enumerate() {
        if lo == hi {
            warnings.push(format!(
                "column {} is constant; every value maps to {}",
                table.column_name(j),
                labels.label(1)
            ));
        }
    }

    let records: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(&ranges)
                .map(|(&x, &(lo, hi))| labels.label(grade_of(x, lo, hi, bins)))
                .collect()
        })
        .collect();
    let dataset = CategoricalDataset::from_records(records)?;
    Ok(Discretized { dataset, warnings })
}
