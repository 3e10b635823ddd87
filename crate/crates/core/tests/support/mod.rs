#![allow(dead_code)]

pub mod dot_grammar;
pub mod oracle;

use proptest::prelude::*;
use rodtree::{Dataset, FeatureSchema, FeatureSpec, Record};

/// A schema of `m` unbounded count features named F0, F1, ...
pub fn count_schema(m: usize) -> FeatureSchema {
    FeatureSchema::new(
        (0..m)
            .map(|i| FeatureSpec::count(&format!("F{i}"), &format!("feature {i}")))
            .collect(),
    )
    .unwrap()
}

/// Labeled datasets of `1..=max_n` records over `1..=max_m` count features with
/// values in `0..max_value`, so ties and repeated values are common.
pub fn dataset(max_n: usize, max_m: usize, max_value: i64) -> impl Strategy<Value = Dataset> {
    (1..=max_m).prop_flat_map(move |m| {
        prop::collection::vec((prop::collection::vec(0..max_value, m), 0u8..2), 1..=max_n).prop_map(
            move |rows| {
                let records = rows
                    .into_iter()
                    .map(|(v, y)| Record::labeled(v, y))
                    .collect();
                Dataset::new(count_schema(m), records, "proptest").unwrap()
            },
        )
    })
}

/// Like [`dataset`] but with both classes present.
pub fn two_class_dataset(
    max_n: usize,
    max_m: usize,
    max_value: i64,
) -> impl Strategy<Value = Dataset> {
    dataset(max_n, max_m, max_value).prop_filter("both classes", |d| {
        let (n0, n1) = d.class_counts().unwrap();
        n0 > 0 && n1 > 0
    })
}

/// Records drawn uniformly inside the ROD schema ranges, capped for counts.
pub fn rod_records(max_n: usize) -> impl Strategy<Value = Vec<Record>> {
    let schema = FeatureSchema::rod();
    let ranges: Vec<(i64, i64)> = schema
        .features()
        .iter()
        .map(|f| (f.min, f.max.min(f.min + 20)))
        .collect();
    let value_vec = ranges
        .into_iter()
        .map(|(lo, hi)| (lo..=hi).boxed())
        .collect::<Vec<_>>();
    prop::collection::vec((value_vec, 0u8..2), 1..=max_n).prop_map(|rows| {
        rows.into_iter()
            .map(|(v, y)| Record::labeled(v, y))
            .collect()
    })
}
