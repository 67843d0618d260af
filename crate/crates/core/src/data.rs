//! Integer-encoded categorical datasets and their frequency statistics.
//!
//! Every attribute owns a domain of category labels; cells store the index of
//! their label in that domain. Domains are induced from the data in
//! first-occurrence order, so every category of a domain occurs at least once
//! in its column.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};

/// Index of a category within an attribute domain.
pub type Code = u32;

/// The observed categories of one attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttributeDomain {
    pub attr_index: usize,
    categories: Vec<String>,
    #[serde(skip)]
    lookup: HashMap<String, Code>,
}

impl AttributeDomain {
    fn new(attr_index: usize) -> Self {
        AttributeDomain {
            attr_index,
            categories: Vec::new(),
            lookup: HashMap::new(),
        }
    }

    fn encode(&mut self, label: &str) -> Code {
        if let Some(&code) = self.lookup.get(label) {
            return code;
        }
        let code = self.categories.len() as Code;
        self.categories.push(label.to_owned());
        self.lookup.insert(label.to_owned(), code);
        code
    }

    /// Number of distinct categories (|O_j|).
    pub fn cardinality(&self) -> usize {
        self.categories.len()
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn label(&self, code: Code) -> Option<&str> {
        self.categories.get(code as usize).map(String::as_str)
    }

    pub fn code_of(&self, label: &str) -> Option<Code> {
        self.lookup.get(label).copied()
    }
}

/// Occurrence counts of every category of one attribute over a set of rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    pub attr_index: usize,
    /// Dense by category code; categories absent from the counted rows are 0.
    pub counts: Vec<usize>,
    pub total: usize,
}

impl FrequencyTable {
    pub fn count(&self, code: Code) -> usize {
        self.counts.get(code as usize).copied().unwrap_or(0)
    }

    pub fn frequency(&self, code: Code) -> f64 {
        self.count(code) as f64 / self.total as f64
    }

    /// Codes with a nonzero count, in increasing code order.
    pub fn support(&self) -> impl Iterator<Item = (Code, usize)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(o, &c)| (o as Code, c))
    }
}

/// Options for [`load_csv_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CsvOptions {
    pub has_header: bool,
    /// Treat the first column as per-row object identifiers rather than an
    /// attribute.
    pub id_column: bool,
}

/// An n x m table of categorical values.
#[derive(Debug, Clone)]
pub struct CategoricalDataset {
    n: usize,
    m: usize,
    /// Row-major, `n * m` codes.
    codes: Vec<Code>,
    domains: Vec<AttributeDomain>,
    counts: Vec<Vec<usize>>,
    header: Option<Vec<String>>,
    object_ids: Option<Vec<String>>,
}

impl CategoricalDataset {
    /// Builds a dataset from rows of category labels.
    pub fn from_records<R, S>(records: R) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut builder = Builder::default();
        for (i, rec) in records.into_iter().enumerate() {
            let fields: Vec<S> = rec.into_iter().collect();
            builder.push(i as u64 + 1, fields.iter().map(AsRef::as_ref))?;
        }
        builder.finish(None, None)
    }

    /// Builds a dataset from rows of arbitrary integer codes. Codes are
    /// re-encoded per column in first-occurrence order; the original value
    /// becomes the category label.
    pub fn from_code_rows<R>(rows: R) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: AsRef<[u32]>,
    {
        let mut builder = Builder::default();
        for (i, row) in rows.into_iter().enumerate() {
            let labels: Vec<String> = row.as_ref().iter().map(u32::to_string).collect();
            builder.push(i as u64 + 1, labels.iter().map(String::as_str))?;
        }
        builder.finish(None, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn domains(&self) -> &[AttributeDomain] {
        &self.domains
    }

    pub fn domain(&self, j: usize) -> &AttributeDomain {
        &self.domains[j]
    }

    pub fn header(&self) -> Option<&[String]> {
        self.header.as_deref()
    }

    pub fn object_ids(&self) -> Option<&[String]> {
        self.object_ids.as_deref()
    }

    /// Display identifier of object `i`: its id label when present, else the
    /// 0-based row index.
    pub fn object_label(&self, i: usize) -> String {
        match &self.object_ids {
            Some(ids) => ids[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn row(&self, i: usize) -> &[Code] {
        &self.codes[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[Code]> + '_ {
        self.codes.chunks_exact(self.m)
    }

    #[inline]
    pub fn code(&self, i: usize, j: usize) -> Code {
        self.codes[i * self.m + j]
    }

    /// Label of cell (i, j).
    pub fn label(&self, i: usize, j: usize) -> &str {
        self.domains[j].categories[self.code(i, j) as usize].as_str()
    }

    /// Count of category `o` in column `j` over the whole dataset (#(o)).
    pub fn count(&self, j: usize, o: Code) -> usize {
        self.counts[j].get(o as usize).copied().unwrap_or(0)
    }

    fn check_attr(&self, j: usize, o: Code) -> Result<()> {
        if j >= self.m {
            return Err(Error::Index(format!("attribute {j} >= m = {}", self.m)));
        }
        if o as usize >= self.domains[j].cardinality() {
            return Err(Error::Index(format!(
                "category {o} outside domain of attribute {j} (cardinality {})",
                self.domains[j].cardinality()
            )));
        }
        Ok(())
    }

    /// Relative frequency of category `o` at attribute `j`: #(o) / n.
    pub fn category_frequency(&self, j: usize, o: Code) -> Result<f64> {
        self.check_attr(j, o)?;
        Ok(self.count(j, o) as f64 / self.n as f64)
    }

    /// Relative frequency of category `o` at attribute `j` among `members`.
    pub fn cluster_frequency(&self, members: &[usize], j: usize, o: Code) -> Result<f64> {
        self.check_attr(j, o)?;
        if members.is_empty() {
            return Err(Error::DegenerateCluster);
        }
        let mut hits = 0usize;
        for &i in members {
            if i >= self.n {
                return Err(Error::Index(format!("object {i} >= n = {}", self.n)));
            }
            if self.code(i, j) == o {
                hits += 1;
            }
        }
        Ok(hits as f64 / members.len() as f64)
    }

    /// Whole-dataset frequency table of attribute `j`.
    pub fn frequency_table(&self, j: usize) -> FrequencyTable {
        FrequencyTable {
            attr_index: j,
            counts: self.counts[j].clone(),
            total: self.n,
        }
    }

    /// Frequency table of attribute `j` restricted to `members`.
    pub fn cluster_frequency_table(&self, members: &[usize], j: usize) -> FrequencyTable {
        let mut counts = vec![0usize; self.domains[j].cardinality()];
        for &i in members {
            counts[self.code(i, j) as usize] += 1;
        }
        FrequencyTable {
            attr_index: j,
            counts,
            total: members.len(),
        }
    }

    /// Writes the dataset back out as CSV, reproducing the original labels.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().from_writer(writer);
        if let Some(header) = &self.header {
            out.write_record(header)?;
        }
        let mut record = Vec::with_capacity(self.m + 1);
        for i in 0..self.n {
            record.clear();
            if let Some(ids) = &self.object_ids {
                record.push(ids[i].as_str());
            }
            record.extend((0..self.m).map(|j| self.label(i, j)));
            out.write_record(&record)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Default)]
struct Builder {
    m: Option<usize>,
    rows: usize,
    codes: Vec<Code>,
    domains: Vec<AttributeDomain>,
}

impl Builder {
    fn push<'a>(&mut self, line: u64, fields: impl Iterator<Item = &'a str>) -> Result<()> {
        let fields: Vec<&str> = fields.collect();
        match self.m {
            None if fields.is_empty() => {
                return Err(Error::Input(format!("line {line}: row has no fields")));
            }
            None => {
                self.m = Some(fields.len());
                self.domains = (0..fields.len()).map(AttributeDomain::new).collect();
            }
            Some(expected) if expected != fields.len() => {
                return Err(Error::RaggedRow {
                    line,
                    expected,
                    found: fields.len(),
                });
            }
            Some(_) => {}
        }
        if let Some(j) = fields.iter().position(|f| f.is_empty()) {
            return Err(Error::MissingValue { line, column: j + 1 });
        }
        for (domain, field) in self.domains.iter_mut().zip(fields) {
            self.codes.push(domain.encode(field));
        }
        self.rows += 1;
        Ok(())
    }

    fn finish(self, header: Option<Vec<String>>, object_ids: Option<Vec<String>>) -> Result<CategoricalDataset> {
        let m = match self.m {
            Some(m) if self.rows > 0 => m,
            _ => return Err(Error::EmptyInput),
        };
        let counts = (0..m)
            .map(|j| {
                let mut c = vec![0usize; self.domains[j].cardinality()];
                for row in self.codes.chunks_exact(m) {
                    c[row[j] as usize] += 1;
                }
                c
            })
            .collect();
        Ok(CategoricalDataset {
            n: self.rows,
            m,
            codes: self.codes,
            domains: self.domains,
            counts,
            header,
            object_ids,
        })
    }
}

/// Reads a categorical CSV. Every cell is treated as an opaque category label.
pub fn load_csv<R: Read>(source: R, has_header: bool) -> Result<CategoricalDataset> {
    load_csv_with(
        source,
        CsvOptions {
            has_header,
            id_column: false,
        },
    )
}

pub fn load_csv_with<R: Read>(source: R, opts: CsvOptions) -> Result<CategoricalDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(source);
    let mut builder = Builder::default();
    let mut header = None;
    let mut ids = opts.id_column.then(Vec::new);
    let mut record = csv::StringRecord::new();
    let mut expected_width: Option<usize> = None;
    while reader.read_record(&mut record)? {
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        // A lone empty line parses as a single empty field.
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match expected_width {
            None => expected_width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::RaggedRow {
                    line,
                    expected: w,
                    found: record.len(),
                })
            }
            Some(_) => {}
        }
        if opts.has_header && header.is_none() {
            header = Some(record.iter().map(str::to_owned).collect());
            continue;
        }
        let mut fields = record.iter();
        if let Some(ids) = ids.as_mut() {
            let id = fields.next().unwrap_or("");
            if id.is_empty() {
                return Err(Error::MissingValue { line, column: 1 });
            }
            ids.push(id.to_owned());
        }
        builder.push(line, fields).map_err(|e| match e {
            Error::MissingValue { line, column } if opts.id_column => Error::MissingValue {
                line,
                column: column + 1,
            },
            other => other,
        })?;
    }
    if opts.id_column && expected_width == Some(1) {
        return Err(Error::Input(
            "id column requested but the file has a single column".into(),
        ));
    }
    builder.finish(header, ids)
}
