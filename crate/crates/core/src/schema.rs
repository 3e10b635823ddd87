//! Feature schema, records, CSV ingestion and seeded train/test splitting.
//!
//! Every feature is integer-encoded and treated as an ordered numeric value:
//! binary flags as 0/1, age and disadvantage categories as ordinal codes, and
//! counts as nonnegative integers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::{self, Stream};

/// Largest value a count feature may take.
pub const COUNT_MAX: i64 = (1 << 31) - 1;

/// Number of ordinal age categories (coded `0..AGE_CATEGORIES`).
pub const AGE_CATEGORIES: i64 = 5;

/// Number of disadvantage quartiles (coded `0..4`).
pub const DISADVANTAGE_QUARTILES: i64 = 4;

pub const LABEL_COLUMN: &str = "label";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Binary,
    OrdinalCategory,
    Count,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpec {
    pub code: String,
    pub name: String,
    pub kind: FeatureKind,
    /// Inclusive bounds.
    pub min: i64,
    pub max: i64,
}

impl FeatureSpec {
    pub fn binary(code: &str, name: &str) -> Self {
        Self::new(code, name, FeatureKind::Binary, 0, 1)
    }

    pub fn ordinal(code: &str, name: &str, categories: i64) -> Self {
        Self::new(code, name, FeatureKind::OrdinalCategory, 0, categories - 1)
    }

    pub fn count(code: &str, name: &str) -> Self {
        Self::new(code, name, FeatureKind::Count, 0, COUNT_MAX)
    }

    fn new(code: &str, name: &str, kind: FeatureKind, min: i64, max: i64) -> Self {
        Self {
            code: code.to_string(),
            name: name.to_string(),
            kind,
            min,
            max,
        }
    }

    pub fn contains(&self, value: i64) -> bool {
        (self.min..=self.max).contains(&value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSchema {
    features: Vec<FeatureSpec>,
}

impl FeatureSchema {
    pub fn new(features: Vec<FeatureSpec>) -> Result<Self> {
        for (i, f) in features.iter().enumerate() {
            if f.min > f.max {
                return Err(Error::SchemaMismatch(format!(
                    "feature {} has empty range [{}, {}]",
                    f.code, f.min, f.max
                )));
            }
            if f.kind == FeatureKind::Binary && (f.min, f.max) != (0, 1) {
                return Err(Error::SchemaMismatch(format!(
                    "binary feature {} must have range [0, 1]",
                    f.code
                )));
            }
            if features[..i].iter().any(|g| g.code == f.code) {
                return Err(Error::SchemaMismatch(format!(
                    "duplicate feature code {}",
                    f.code
                )));
            }
        }
        Ok(Self { features })
    }

    /// The eleven ROD features in their canonical order.
    pub fn rod() -> Self {
        use FeatureSpec as F;
        Self::new(vec![
            F::binary("G", "Gender"),
            F::ordinal("A", "Age category", AGE_CATEGORIES),
            F::binary("IS", "Indigenous status"),
            F::ordinal(
                "DA",
                "Disadvantage areas index (quartiles)",
                DISADVANTAGE_QUARTILES,
            ),
            F::count("CO", "Concurrent offences"),
            F::count("AB", "AVO breaches"),
            F::count("PC", "Prior juvenile or adult convictions"),
            F::count(
                "P5",
                "Prior serious violent offence conviction past 5 years",
            ),
            F::count(
                "P2",
                "Prior DV-related property damage conviction past 2 years",
            ),
            F::count("PO", "Prior bonds past 5 years"),
            F::count("PP", "Prior prison or custodial order"),
        ])
        .expect("canonical schema is valid")
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn feature(&self, index: usize) -> &FeatureSpec {
        &self.features[index]
    }

    pub fn code(&self, index: usize) -> &str {
        &self.features[index].code
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(|f| f.code.as_str())
    }

    /// Looks up a feature by code. "AV" is accepted as an alias for "AB".
    pub fn index_of(&self, code: &str) -> Option<usize> {
        let code = code.trim();
        self.features
            .iter()
            .position(|f| f.code == code)
            .or_else(|| match code {
                "AV" => self.index_of("AB"),
                _ => None,
            })
    }

    /// Parses a comma-separated list of feature codes into sorted indices.
    pub fn parse_feature_list(&self, list: &str) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for code in list.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let idx = self
                .index_of(code)
                .ok_or_else(|| Error::SchemaMismatch(format!("unknown feature {code}")))?;
            if !out.contains(&idx) {
                out.push(idx);
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyFeatureSet);
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn join_codes(&self, indices: &[usize]) -> String {
        indices
            .iter()
            .map(|&i| self.code(i))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn validate(&self, record: &Record) -> Result<()> {
        if record.values.len() != self.len() {
            return Err(Error::SchemaMismatch(format!(
                "record has {} values, schema has {} features",
                record.values.len(),
                self.len()
            )));
        }
        for (spec, &v) in self.features.iter().zip(&record.values) {
            if !spec.contains(v) {
                return Err(Error::InvalidRecord(format!(
                    "feature {} value {} outside [{}, {}]",
                    spec.code, v, spec.min, spec.max
                )));
            }
        }
        if let Some(y) = record.label {
            if y > 1 {
                return Err(Error::InvalidRecord(format!("label {y} is not binary")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Record {
    pub values: Vec<i64>,
    /// 1 = re-offended within the follow-up window, 0 = did not.
    pub label: Option<u8>,
}

impl Record {
    pub fn labeled(values: Vec<i64>, label: u8) -> Self {
        Self {
            values,
            label: Some(label),
        }
    }

    pub fn unlabeled(values: Vec<i64>) -> Self {
        Self {
            values,
            label: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub schema: FeatureSchema,
    pub records: Vec<Record>,
    pub provenance: String,
}

impl Dataset {
    /// Builds a dataset, validating every record against `schema`.
    pub fn new(
        schema: FeatureSchema,
        records: Vec<Record>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            schema.validate(r).map_err(|e| match e {
                Error::InvalidRecord(m) => Error::InvalidRecord(format!("record {i}: {m}")),
                other => other,
            })?;
        }
        Ok(Self {
            schema,
            records,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// A dataset sharing this schema with a different set of records.
    pub fn with_records(&self, records: Vec<Record>, provenance: impl Into<String>) -> Self {
        Self {
            schema: self.schema.clone(),
            records,
            provenance: provenance.into(),
        }
    }

    /// Keeps only the columns in `features`, in the given order.
    pub fn project(&self, features: &[usize]) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::EmptyFeatureSet);
        }
        if let Some(&f) = features.iter().find(|&&f| f >= self.schema.len()) {
            return Err(Error::InvalidParameter(format!(
                "feature index {f} out of range"
            )));
        }
        let schema = FeatureSchema::new(
            features
                .iter()
                .map(|&f| self.schema.feature(f).clone())
                .collect(),
        )?;
        let records = self
            .records
            .iter()
            .map(|r| Record {
                values: features.iter().map(|&f| r.values[f]).collect(),
                label: r.label,
            })
            .collect();
        Ok(Self {
            schema,
            records,
            provenance: format!(
                "{} | features {}",
                self.provenance,
                self.schema.join_codes(features)
            ),
        })
    }

    pub fn labels(&self) -> Result<Vec<u8>> {
        self.records
            .iter()
            .enumerate()
            .map(|(i, r)| r.label.ok_or(Error::Unlabeled(i)))
            .collect()
    }

    /// Returns `(n0, n1)`.
    pub fn class_counts(&self) -> Result<(usize, usize)> {
        let mut n = [0usize; 2];
        for y in self.labels()? {
            n[y as usize] += 1;
        }
        Ok((n[0], n[1]))
    }

    pub fn load_csv(path: impl AsRef<Path>, schema: &FeatureSchema) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut ds = Self::read_csv(file, schema)?;
        ds.provenance = format!("csv {}", path.display());
        Ok(ds)
    }

    /// Reads the CSV format: a header of schema codes plus `label`, then
    /// integer rows. Row numbers in errors count the header as row 1.
    pub fn read_csv<R: std::io::Read>(reader: R, schema: &FeatureSchema) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers()?.clone();

        let mut column_of = vec![None; schema.len()];
        let mut label_col = None;
        for (col, name) in header.iter().enumerate() {
            if name == LABEL_COLUMN {
                label_col = Some(col);
                continue;
            }
            match schema.index_of(name) {
                Some(f) if column_of[f].is_none() => column_of[f] = Some(col),
                Some(_) => return Err(Error::SchemaMismatch(format!("duplicate column {name}"))),
                None => return Err(Error::SchemaMismatch(format!("unexpected column {name}"))),
            }
        }
        if let Some(f) = column_of.iter().position(Option::is_none) {
            return Err(Error::SchemaMismatch(format!(
                "missing column {}",
                schema.code(f)
            )));
        }
        let label_col = label_col
            .ok_or_else(|| Error::SchemaMismatch(format!("missing column {LABEL_COLUMN}")))?;
        let column_of: Vec<usize> = column_of.into_iter().flatten().collect();

        let mut records = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let row_no = i + 2;
            let row = row?;
            if row.len() != header.len() {
                return Err(Error::Parse {
                    row: row_no,
                    message: format!("expected {} fields, found {}", header.len(), row.len()),
                });
            }
            let mut values = Vec::with_capacity(schema.len());
            for (f, &col) in column_of.iter().enumerate() {
                let spec = schema.feature(f);
                let cell = &row[col];
                let v: i64 = cell.parse().map_err(|_| Error::Parse {
                    row: row_no,
                    message: format!("feature {}: {cell:?} is not an integer", spec.code),
                })?;
                if !spec.contains(v) {
                    return Err(Error::Parse {
                        row: row_no,
                        message: format!(
                            "feature {}: value {v} outside [{}, {}]",
                            spec.code, spec.min, spec.max
                        ),
                    });
                }
                values.push(v);
            }
            let label = match &row[label_col] {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::Parse {
                        row: row_no,
                        message: format!("label {other:?} is not 0 or 1"),
                    })
                }
            };
            records.push(Record::labeled(values, label));
        }
        Ok(Self {
            schema: schema.clone(),
            records,
            provenance: String::new(),
        })
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_csv(&mut w)
            .and_then(|_| w.flush().map_err(|e| Error::io(path, e)))
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let labels = self.labels()?;
        let mut out = String::new();
        for code in self.schema.codes() {
            out.push_str(code);
            out.push(',');
        }
        out.push_str(LABEL_COLUMN);
        out.push('\n');
        for (r, y) in self.records.iter().zip(labels) {
            for v in &r.values {
                out.push_str(&v.to_string());
                out.push(',');
            }
            out.push(if y == 1 { '1' } else { '0' });
            out.push('\n');
        }
        w.write_all(out.as_bytes())
            .map_err(|e| Error::io("<csv writer>", e))
    }

    /// Shuffles with the split stream of `seed` and cuts off
    /// `round_half_up(train_fraction * n)` records for training.
    pub fn train_test_split(&self, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "train fraction {train_fraction} not in (0, 1)"
            )));
        }
        if self.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let n_train = train_size(self.len(), train_fraction);
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.shuffle(&mut rng::seeded(seed, Stream::Split));
        let pick = |idx: &[usize]| idx.iter().map(|&i| self.records[i].clone()).collect();
        let train = self.with_records(
            pick(&order[..n_train]),
            format!("{} | train {train_fraction} seed={seed}", self.provenance),
        );
        let test = self.with_records(
            pick(&order[n_train..]),
            format!("{} | test {train_fraction} seed={seed}", self.provenance),
        );
        Ok((train, test))
    }
}

/// `round(fraction * n)` with halves rounded up.
pub fn train_size(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64) + 0.5).floor() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> String {
        "G,A,IS,DA,CO,AB,PC,P5,P2,PO,PP,label".to_string()
    }

    #[test]
    fn rod_schema_order() {
        let s = FeatureSchema::rod();
        let codes: Vec<_> = s.codes().collect();
        assert_eq!(
            codes,
            ["G", "A", "IS", "DA", "CO", "AB", "PC", "P5", "P2", "PO", "PP"]
        );
        assert_eq!(s.index_of("AV"), s.index_of("AB"));
        assert_eq!(s.feature(10).max, COUNT_MAX);
    }

    #[test]
    fn schema_rejects_duplicates_and_bad_binary() {
        let dup = FeatureSchema::new(vec![
            FeatureSpec::binary("X", ""),
            FeatureSpec::count("X", ""),
        ]);
        assert!(matches!(dup, Err(Error::SchemaMismatch(_))));
        let mut bad = FeatureSpec::binary("B", "");
        bad.max = 2;
        assert!(FeatureSchema::new(vec![bad]).is_err());
    }

    #[test]
    fn parses_three_rows() {
        let text = format!(
            "{}\n1,0,0,1,2,0,3,0,0,1,0,0\n0,4,1,3,1,0,0,0,0,0,2,1\n1,2,0,0,5,1,7,1,0,2,1,1\n",
            header()
        );
        let ds = Dataset::read_csv(text.as_bytes(), &FeatureSchema::rod()).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.class_counts().unwrap(), (1, 2));
        assert_eq!(ds.records[1].values[1], 4);
    }

    #[test]
    fn negative_count_is_a_parse_error_naming_row_and_feature() {
        let text = format!("{}\n1,0,0,1,2,0,3,0,0,1,-1,0\n", header());
        match Dataset::read_csv(text.as_bytes(), &FeatureSchema::rod()) {
            Err(Error::Parse { row, message }) => {
                assert_eq!(row, 2);
                assert!(message.contains("PP"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_integer_cell_is_a_parse_error() {
        let text = format!("{}\n1,0,0,1,2.5,0,3,0,0,1,0,0\n", header());
        let err = Dataset::read_csv(text.as_bytes(), &FeatureSchema::rod()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }));
    }

    #[test]
    fn missing_and_extra_columns_are_named() {
        let missing = "G,A,IS,DA,CO,AB,PC,P5,P2,PO,label\n";
        let err = Dataset::read_csv(missing.as_bytes(), &FeatureSchema::rod()).unwrap_err();
        assert!(err.to_string().contains("PP"), "{err}");

        let extra = format!("{},ZZ\n", header());
        let err = Dataset::read_csv(extra.as_bytes(), &FeatureSchema::rod()).unwrap_err();
        assert!(err.to_string().contains("ZZ"), "{err}");

        let no_label = "G,A,IS,DA,CO,AB,PC,P5,P2,PO,PP\n";
        let err = Dataset::read_csv(no_label.as_bytes(), &FeatureSchema::rod()).unwrap_err();
        assert!(err.to_string().contains("label"), "{err}");
    }

    #[test]
    fn empty_dataset_writes_header_only() {
        let ds = Dataset::new(FeatureSchema::rod(), vec![], "").unwrap();
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), header() + "\n");
    }

    #[test]
    fn class_counts_examples() {
        let s = FeatureSchema::new(vec![FeatureSpec::binary("X", "x")]).unwrap();
        let mk = |ys: &[u8]| {
            Dataset::new(
                s.clone(),
                ys.iter().map(|&y| Record::labeled(vec![0], y)).collect(),
                "",
            )
            .unwrap()
        };
        assert_eq!(mk(&[0, 0, 1]).class_counts().unwrap(), (2, 1));
        assert_eq!(mk(&[1, 1, 1, 1]).class_counts().unwrap(), (0, 4));

        let unl = Dataset::new(s, vec![Record::unlabeled(vec![1])], "").unwrap();
        assert!(matches!(unl.class_counts(), Err(Error::Unlabeled(0))));
    }

    #[test]
    fn split_sizes_round_half_up() {
        assert_eq!(train_size(10, 0.7), 7);
        assert_eq!(train_size(27_188, 0.7), 19_032);
        assert_eq!(27_188 - train_size(27_188, 0.7), 8_156);
        assert_eq!(train_size(5, 0.5), 3);
    }

    #[test]
    fn split_is_deterministic_and_validates_input() {
        let s = FeatureSchema::new(vec![FeatureSpec::count("X", "x")]).unwrap();
        let ds = Dataset::new(
            s.clone(),
            (0..10)
                .map(|i| Record::labeled(vec![i], (i % 2) as u8))
                .collect(),
            "",
        )
        .unwrap();
        let (a, b) = ds.train_test_split(0.7, 9).unwrap();
        assert_eq!((a.len(), b.len()), (7, 3));
        let (a2, b2) = ds.train_test_split(0.7, 9).unwrap();
        assert_eq!(a.records, a2.records);
        assert_eq!(b.records, b2.records);

        assert!(ds.train_test_split(1.0, 0).is_err());
        assert!(ds.train_test_split(0.0, 0).is_err());
        let empty = Dataset::new(s, vec![], "").unwrap();
        assert!(matches!(
            empty.train_test_split(0.7, 0),
            Err(Error::EmptyDataset)
        ));
    }
}
