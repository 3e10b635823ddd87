//! Reference computations written straight from the definitions, sharing no
//! code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::Ratio;

pub type Q = Ratio<i64>;

/// `1 - p0^2 - p1^2` for the labels in `ys`.
pub fn gini(ys: &[u8]) -> Q {
    let n = ys.len() as i64;
    let n1 = ys.iter().filter(|&&y| y == 1).count() as i64;
    let n0 = n - n1;
    Q::from_integer(1) - Q::new(n0 * n0 + n1 * n1, n * n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSplit {
    pub feature: usize,
    pub threshold: Q,
    pub decrease: Q,
}

/// Tries every feature and every midpoint between consecutive distinct
/// values; keeps the strictly largest decrease, so the first of equals wins.
pub fn best_split(rows: &[(Vec<i64>, u8)], min_leaf: usize) -> Option<OracleSplit> {
    if rows.is_empty() {
        return None;
    }
    let ys: Vec<u8> = rows.iter().map(|r| r.1).collect();
    let parent = gini(&ys);
    let n = rows.len() as i64;
    let m = rows[0].0.len();
    let mut best: Option<OracleSplit> = None;
    for f in 0..m {
        let distinct: BTreeSet<i64> = rows.iter().map(|r| r.0[f]).collect();
        let distinct: Vec<i64> = distinct.into_iter().collect();
        for w in distinct.windows(2) {
            let t = Q::new(w[0] + w[1], 2);
            let (l, r): (Vec<_>, Vec<_>) =
                rows.iter().partition(|row| Q::from_integer(row.0[f]) <= t);
            if l.len() < min_leaf || r.len() < min_leaf {
                continue;
            }
            let ly: Vec<u8> = l.iter().map(|r| r.1).collect();
            let ry: Vec<u8> = r.iter().map(|r| r.1).collect();
            let d = parent
                - Q::new(ly.len() as i64, n) * gini(&ly)
                - Q::new(ry.len() as i64, n) * gini(&ry);
            if d > Q::from_integer(0) && best.as_ref().is_none_or(|b| d > b.decrease) {
                best = Some(OracleSplit {
                    feature: f,
                    threshold: t,
                    decrease: d,
                });
            }
        }
    }
    best
}

/// Probability that a random positive outscores a random negative, with
/// ties counted as one half, by direct enumeration of all pairs.
pub fn auc_pairs(labels: &[u8], scores: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &yi) in labels.iter().enumerate() {
        if yi != 1 {
            continue;
        }
        for (j, &yj) in labels.iter().enumerate() {
            if yj != 0 {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}
