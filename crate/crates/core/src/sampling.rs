//! Class balancing by under-sampling the majority class or replicating the
//! minority class.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};

use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::schema::{Dataset, Record};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Under,
    Over,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::Under, Strategy::Over];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Under => "under",
            Strategy::Over => "over",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "under" => Ok(Strategy::Under),
            "over" => Ok(Strategy::Over),
            other => Err(Error::InvalidParameter(format!(
                "balance method {other:?} (expected under or over)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalanceMethod {
    pub strategy: Strategy,
    pub seed: u64,
}

impl BalanceMethod {
    pub fn new(strategy: Strategy, seed: u64) -> Self {
        Self { strategy, seed }
    }

    pub fn apply(&self, data: &Dataset) -> Result<Dataset> {
        match self.strategy {
            Strategy::Under => under_sample(data, self.seed),
            Strategy::Over => over_sample(data, self.seed),
        }
    }
}

struct Classes<'a> {
    minority: Vec<&'a Record>,
    majority: Vec<&'a Record>,
}

/// Splits records by class. Class 1 is the minority unless it is strictly
/// larger than class 0.
fn partition(data: &Dataset) -> Result<Classes<'_>> {
    let labels = data.labels()?;
    let mut by_class: [Vec<&Record>; 2] = [Vec::new(), Vec::new()];
    for (r, y) in data.records.iter().zip(labels) {
        by_class[y as usize].push(r);
    }
    for (y, recs) in by_class.iter().enumerate() {
        if recs.is_empty() {
            return Err(Error::EmptyClass(y as u8));
        }
    }
    let [zeros, ones] = by_class;
    Ok(if ones.len() <= zeros.len() {
        Classes {
            minority: ones,
            majority: zeros,
        }
    } else {
        Classes {
            minority: zeros,
            majority: ones,
        }
    })
}

/// Keeps every minority record and an equal-sized uniform sample (without
/// replacement) of the majority class, then shuffles.
pub fn under_sample(data: &Dataset, seed: u64) -> Result<Dataset> {
    let classes = partition(data)?;
    let n_min = classes.minority.len();
    let mut rng = rng::seeded(seed, Stream::Balance);

    let mut out: Vec<Record> = classes.minority.iter().map(|&r| r.clone()).collect();
    let mut picked = index::sample(&mut rng, classes.majority.len(), n_min).into_vec();
    picked.sort_unstable();
    out.extend(picked.into_iter().map(|i| classes.majority[i].clone()));
    out.shuffle(&mut rng);

    Ok(data.with_records(out, format!("{} | under seed={seed}", data.provenance)))
}

/// Keeps every majority record and replicates minority records round-robin
/// until both classes are the same size, then shuffles.
///
/// Each minority record appears `q` or `q + 1` times, where `q` is the integer
/// quotient of the class sizes; the records receiving the extra copy are drawn
/// without replacement.
pub fn over_sample(data: &Dataset, seed: u64) -> Result<Dataset> {
    let classes = partition(data)?;
    let n_min = classes.minority.len();
    let n_maj = classes.majority.len();
    let mut rng = rng::seeded(seed, Stream::Balance);
    let copies = replication_counts(n_min, n_maj, &mut rng);

    let mut out: Vec<Record> = Vec::with_capacity(2 * n_maj);
    out.extend(classes.majority.iter().map(|&r| r.clone()));
    for (r, &k) in classes.minority.iter().zip(&copies) {
        out.extend(std::iter::repeat_n(*r, k).cloned());
    }
    out.shuffle(&mut rng);

    Ok(data.with_records(out, format!("{} | over seed={seed}", data.provenance)))
}

/// Copy count per minority record so the copies total `n_maj`.
pub fn replication_counts(n_min: usize, n_maj: usize, rng: &mut rng::Rng) -> Vec<usize> {
    let q = n_maj / n_min;
    let rem = n_maj % n_min;
    let mut counts = vec![q; n_min];
    for i in index::sample(rng, n_min, rem) {
        counts[i] += 1;
    }
    counts
}
