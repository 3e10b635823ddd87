//! Recursive feature elimination: balance the training data, then train a
//! tree on the current feature set, evaluate it, and drop the least
//! important feature until none remain.

use std::collections::BTreeMap;
use std::fmt;

use crate::cart::{self, Importances, Tree, TreeParams, TreeSize};
use crate::error::{Error, Result};
use crate::metrics::MetricsReport;
use crate::sampling::{BalanceMethod, Strategy};
use crate::scalar::Scalar;
use crate::schema::{Dataset, FeatureSchema};

#[derive(Debug, Clone, PartialEq)]
pub struct RfeEntry<T> {
    pub tree: Tree<T>,
    /// Sorted feature indices available to this step's tree.
    pub features_used: Vec<usize>,
    pub tree_size: TreeSize,
    pub auc: T,
    pub f_measure: T,
    /// The feature removed after this step.
    pub eliminated: usize,
}

/// Balances `train` with `balance` and runs the elimination loop.
pub fn run_rfe<T: Scalar>(
    train: &Dataset,
    test: &Dataset,
    balance: BalanceMethod,
    params: TreeParams,
) -> Result<Vec<RfeEntry<T>>> {
    if train.schema != test.schema {
        return Err(Error::SchemaMismatch(
            "train and test sets use different schemas".into(),
        ));
    }
    let balanced = balance.apply(train)?;
    eliminate(&balanced, test, params)
}

/// The elimination loop on an already balanced training set. Returns one
/// entry per feature, the first using all of them and the last exactly one.
pub fn eliminate<T: Scalar>(
    train: &Dataset,
    test: &Dataset,
    params: TreeParams,
) -> Result<Vec<RfeEntry<T>>> {
    if train.schema != test.schema {
        return Err(Error::SchemaMismatch(
            "train and test sets use different schemas".into(),
        ));
    }
    let mut current: Vec<usize> = (0..train.schema.len()).collect();
    if current.is_empty() {
        return Err(Error::EmptyFeatureSet);
    }
    let mut entries = Vec::with_capacity(current.len());
    while !current.is_empty() {
        let tree = cart::grow::<T>(train, &current, params)?;
        let report = evaluate(&tree, test)?;
        let eliminated = least_important(&tree, &current)?;
        entries.push(RfeEntry {
            tree_size: tree.size(),
            features_used: current.clone(),
            auc: report.auc,
            f_measure: report.f_measure,
            eliminated,
            tree,
        });
        current.retain(|&f| f != eliminated);
    }
    Ok(entries)
}

/// Scores `test` with leaf probabilities (ROC) and leaf labels (F-measure).
pub fn evaluate<T: Scalar>(tree: &Tree<T>, test: &Dataset) -> Result<MetricsReport<T>> {
    let labels = test.labels()?;
    let mut scores = Vec::with_capacity(test.len());
    let mut preds = Vec::with_capacity(test.len());
    for r in &test.records {
        let leaf = tree.leaf_for(r)?;
        scores.push(leaf.prob_positive());
        preds.push(leaf.predicted_label());
    }
    MetricsReport::new(&labels, &scores, &preds)
}

pub fn least_important<T: Scalar>(tree: &Tree<T>, features: &[usize]) -> Result<usize> {
    least_important_by(&tree.feature_importances(), features)
}

/// Feature in `features` with the smallest importance; ties go to the
/// largest schema index.
pub fn least_important_by<T: Scalar>(imp: &Importances<T>, features: &[usize]) -> Result<usize> {
    let mut best: Option<usize> = None;
    for &f in features {
        best = match best {
            None => Some(f),
            Some(b) => {
                let (vf, vb) = (imp.get(f), imp.get(b));
                if vf < vb || (vf == vb && f > b) {
                    Some(f)
                } else {
                    Some(b)
                }
            }
        };
    }
    best.ok_or(Error::EmptyFeatureSet)
}

pub fn elimination_order<T>(entries: &[RfeEntry<T>]) -> Vec<usize> {
    entries.iter().map(|e| e.eliminated).collect()
}

pub const LEDGER_HEADER: &str = "n_features,feature_codes,total_nodes,leaf_count,auc,f_measure";

/// One CSV row per entry; feature codes are space separated.
pub fn ledger_csv<T: Scalar>(entries: &[RfeEntry<T>], schema: &FeatureSchema) -> String {
    let mut out = String::from(LEDGER_HEADER);
    out.push('\n');
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            e.features_used.len(),
            schema.join_codes(&e.features_used),
            e.tree_size.total_nodes,
            e.tree_size.leaf_count,
            e.auc.as_f64(),
            e.f_measure.as_f64()
        ));
    }
    out
}

/// One elimination sequence, first-removed first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingRun {
    pub strategy: Strategy,
    pub config: String,
    pub schema: FeatureSchema,
    pub elimination_order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingRow {
    pub strategy: Strategy,
    pub runs: usize,
    /// `(feature, mean rank)`, most important first.
    pub ranked: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    pub schema: FeatureSchema,
    pub rows: Vec<RankingRow>,
    pub raw: Vec<RankingRun>,
}

/// Mean rank per feature and balance method. The feature removed at step `k`
/// (0-based) of an `m`-feature run has rank `m - k`, so the last survivor is
/// ranked 1. Equal means keep schema order.
pub fn aggregate_rankings(runs: &[RankingRun]) -> Result<RankingReport> {
    let first = runs
        .first()
        .ok_or_else(|| Error::InvalidParameter("no runs to aggregate".into()))?;
    let schema = first.schema.clone();
    let m = schema.len();
    let mut by_method: BTreeMap<Strategy, (usize, Vec<f64>)> = BTreeMap::new();
    for run in runs {
        if run.schema != schema {
            return Err(Error::SchemaMismatch(format!(
                "run {:?} uses a different schema",
                run.config
            )));
        }
        let mut seen = vec![false; m];
        for &f in &run.elimination_order {
            if f >= m || std::mem::replace(&mut seen[f], true) {
                return Err(Error::InvalidParameter(format!(
                    "run {:?} is not a permutation of the schema",
                    run.config
                )));
            }
        }
        if run.elimination_order.len() != m {
            return Err(Error::InvalidParameter(format!(
                "run {:?} eliminates {} of {m} features",
                run.config,
                run.elimination_order.len()
            )));
        }
        let (count, sums) = by_method
            .entry(run.strategy)
            .or_insert_with(|| (0, vec![0.0; m]));
        *count += 1;
        for (step, &f) in run.elimination_order.iter().enumerate() {
            sums[f] += (m - step) as f64;
        }
    }
    let rows = by_method
        .into_iter()
        .map(|(strategy, (count, sums))| {
            let mut ranked: Vec<(usize, f64)> = sums
                .into_iter()
                .enumerate()
                .map(|(f, s)| (f, s / count as f64))
                .collect();
            ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            RankingRow {
                strategy,
                runs: count,
                ranked,
            }
        })
        .collect();
    Ok(RankingReport {
        schema,
        rows,
        raw: runs.to_vec(),
    })
}

impl fmt::Display for RankingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.schema.len();
        write!(f, "{:<16}", "method")?;
        for k in 1..=m {
            write!(f, " {k:>4}")?;
        }
        writeln!(f)?;
        for row in &self.rows {
            write!(f, "{:<16}", format!("{} ({})", row.strategy, row.runs))?;
            for &(feat, _) in &row.ranked {
                write!(f, " {:>4}", self.schema.code(feat))?;
            }
            writeln!(f)?;
        }
        writeln!(f)?;
        writeln!(f, "mean ranks")?;
        for row in &self.rows {
            write!(f, "{:<16}", row.strategy.as_str())?;
            for &(feat, r) in &row.ranked {
                write!(f, " {}={r:.2}", self.schema.code(feat))?;
            }
            writeln!(f)?;
        }
        writeln!(f)?;
        writeln!(f, "elimination orders (first removed first)")?;
        for run in &self.raw {
            writeln!(
                f,
                "{:<6} {:<28} {}",
                run.strategy.as_str(),
                run.config,
                self.schema.join_codes(&run.elimination_order)
            )?;
        }
        Ok(())
    }
}
