use std::cmp::Ordering;

use super::{gini_of, ClassCounts, SplitRule};
use crate::scalar::Scalar;
use crate::schema::Record;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestSplit<T> {
    pub rule: SplitRule<T>,
    /// `G(parent) - nL/n * G(left) - nR/n * G(right)`.
    pub decrease: T,
    pub left: ClassCounts,
    pub right: ClassCounts,
    pub(crate) gain: Gain,
}

/// Exact non-negative fraction `num / den`, used to compare split quality
/// without rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Gain {
    num: u128,
    den: u128,
}

impl Gain {
    fn new(num: u128, den: u128) -> Self {
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub(crate) fn is_positive(&self) -> bool {
        self.num > 0
    }
}

impl Ord for Gain {
    fn cmp(&self, other: &Self) -> Ordering {
        match (
            self.num.checked_mul(other.den),
            other.num.checked_mul(self.den),
        ) {
            (Some(a), Some(b)) => a.cmp(&b),
            // out of exact range; fall back to floating point
            _ => (self.num as f64 / self.den as f64)
                .partial_cmp(&(other.num as f64 / other.den as f64))
                .unwrap_or(Ordering::Equal),
        }
    }
}

impl PartialOrd for Gain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `n * decrease` as an exact fraction.
///
/// With `q = c0^2 + c1^2`, a node of size `n` has `n * G = n - q / n`, so
/// `n * decrease = qL/nL + qR/nR - q/n`.
pub(crate) fn weighted_gain(parent: ClassCounts, left: ClassCounts, right: ClassCounts) -> Gain {
    let (n, nl, nr) = (
        parent.total() as u128,
        left.total() as u128,
        right.total() as u128,
    );
    let children = left.sum_of_squares() * nr * n + right.sum_of_squares() * nl * n;
    let parent_term = parent.sum_of_squares() * nl * nr;
    Gain::new(children.saturating_sub(parent_term), n * nl * nr)
}

pub(crate) fn decrease<T: Scalar>(parent: ClassCounts, left: ClassCounts, right: ClassCounts) -> T {
    let n = parent.total();
    gini_of::<T>(parent)
        - T::ratio(left.total(), n) * gini_of::<T>(left)
        - T::ratio(right.total(), n) * gini_of::<T>(right)
}

/// Best threshold split over `features`, or `None` when no admissible
/// split strictly decreases impurity.
///
/// Candidates are midpoints between consecutive distinct values of each
/// feature; both sides must hold at least `min_samples_leaf` records. Ties go
/// to the lowest feature index, then the lowest threshold. Records must be
/// labeled.
pub fn best_split<T: Scalar>(
    records: &[&Record],
    features: &[usize],
    min_samples_leaf: usize,
) -> Option<BestSplit<T>> {
    let mut parent = ClassCounts::default();
    for r in records {
        parent.add(r.label.expect("labeled record"));
    }
    if records.len() < 2 || parent.is_pure() {
        return None;
    }
    let min_leaf = min_samples_leaf.max(1);

    let mut sorted_features = features.to_vec();
    sorted_features.sort_unstable();
    sorted_features.dedup();

    let mut column: Vec<(i64, u8)> = Vec::with_capacity(records.len());
    let mut best: Option<(usize, i64, i64, ClassCounts, Gain)> = None;
    for &f in &sorted_features {
        column.clear();
        column.extend(records.iter().map(|r| (r.values[f], r.label.unwrap_or(0))));
        column.sort_unstable_by_key(|&(v, _)| v);

        let mut left = ClassCounts::default();
        for i in 0..column.len() - 1 {
            left.add(column[i].1);
            let (lo, hi) = (column[i].0, column[i + 1].0);
            if lo == hi {
                continue;
            }
            let right = parent - left;
            if left.total() < min_leaf || right.total() < min_leaf {
                continue;
            }
            let gain = weighted_gain(parent, left, right);
            if !gain.is_positive() {
                continue;
            }
            if best.is_none_or(|(.., g)| gain > g) {
                best = Some((f, lo, hi, left, gain));
            }
        }
    }

    best.map(|(feature, lo, hi, left, gain)| {
        let right = parent - left;
        BestSplit {
            rule: SplitRule {
                feature,
                threshold: (T::from_value(lo) + T::from_value(hi)) * T::half(),
            },
            decrease: decrease(parent, left, right),
            left,
            right,
            gain,
        }
    })
}
