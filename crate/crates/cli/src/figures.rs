//! Pivot a sweep ledger into per-panel data files and a gnuplot script.
//!
//! For each balance method there is one file per metric (tree size, AUC,
//! F-measure) with a row per feature count and a column per leaf budget,
//! averaged over repeat seeds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Result};

use rodtree::cart::LeafBudget;
use rodtree::sampling::Strategy;

use crate::experiment::LedgerRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Size,
    Auc,
    FMeasure,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Size, Metric::Auc, Metric::FMeasure];

    pub fn tag(self) -> &'static str {
        match self {
            Metric::Size => "size",
            Metric::Auc => "auc",
            Metric::FMeasure => "fmeasure",
        }
    }

    fn label(self) -> &'static str {
        match self {
            Metric::Size => "tree size (nodes)",
            Metric::Auc => "AUC-ROC",
            Metric::FMeasure => "F-measure",
        }
    }

    fn value(self, r: &LedgerRow) -> f64 {
        match self {
            Metric::Size => r.total_nodes as f64,
            Metric::Auc => r.auc,
            Metric::FMeasure => r.f_measure,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureFile {
    pub name: String,
    pub contents: String,
}

fn budget_key(b: &LeafBudget) -> (u8, usize) {
    match *b {
        LeafBudget::Bounded(k) => (0, k),
        LeafBudget::Unbounded => (1, 0),
    }
}

pub fn data_file_name(balance: Strategy, metric: Metric) -> String {
    format!("fig1_{}_{}.csv", balance, metric.tag())
}

/// Three data files per balance method present in `rows`, plus `fig1.gp`.
pub fn figure_files(rows: &[LedgerRow]) -> Result<Vec<FigureFile>> {
    if rows.is_empty() {
        bail!("ledger has no rows");
    }
    let mut balances: Vec<Strategy> = rows.iter().map(|r| r.balance).collect();
    balances.sort();
    balances.dedup();

    let mut files = Vec::new();
    for &balance in &balances {
        let subset: Vec<&LedgerRow> = rows.iter().filter(|r| r.balance == balance).collect();
        let mut budgets: Vec<LeafBudget> = subset.iter().map(|r| r.max_leaf_nodes).collect();
        budgets.sort_by_key(budget_key);
        budgets.dedup();
        let mut features: Vec<usize> = subset.iter().map(|r| r.n_features).collect();
        features.sort_unstable_by(|a, b| b.cmp(a));
        features.dedup();

        for metric in Metric::ALL {
            let mut acc: BTreeMap<(usize, (u8, usize)), (f64, usize)> = BTreeMap::new();
            for r in &subset {
                let e = acc
                    .entry((r.n_features, budget_key(&r.max_leaf_nodes)))
                    .or_insert((0.0, 0));
                e.0 += metric.value(r);
                e.1 += 1;
            }
            let mut text = String::from("n_features");
            for b in &budgets {
                let _ = write!(text, ",k={b}");
            }
            text.push('\n');
            for &m in &features {
                let _ = write!(text, "{m}");
                for b in &budgets {
                    match acc.get(&(m, budget_key(b))) {
                        Some(&(sum, n)) => {
                            let _ = write!(text, ",{}", sum / n as f64);
                        }
                        None => text.push_str(",?"),
                    }
                }
                text.push('\n');
            }
            files.push(FigureFile {
                name: data_file_name(balance, metric),
                contents: text,
            });
        }
    }
    files.push(FigureFile {
        name: "fig1.gp".into(),
        contents: gnuplot_script(rows, &balances),
    });
    Ok(files)
}

fn gnuplot_script(rows: &[LedgerRow], balances: &[Strategy]) -> String {
    let max_features = rows.iter().map(|r| r.n_features).max().unwrap_or(1);
    let mut s = String::new();
    s.push_str("# gnuplot fig1.gp  ->  fig1.png\n");
    let _ = writeln!(
        s,
        "set terminal pngcairo size {},1200\nset output 'fig1.png'",
        500 * balances.len()
    );
    s.push_str("set datafile separator ','\nset datafile missing '?'\n");
    s.push_str("set key autotitle columnhead outside right\nset grid\n");
    let _ = writeln!(s, "set xrange [{}:1]", max_features.max(2));
    s.push_str("set xlabel 'number of features'\n");
    let _ = writeln!(s, "set multiplot layout 3,{}", balances.len());
    for metric in Metric::ALL {
        for &b in balances {
            let file = data_file_name(b, metric);
            let _ = writeln!(s, "set title '{} ({}-sampling)'", metric.label(), b);
            let _ = writeln!(s, "set ylabel '{}'", metric.label());
            match metric {
                Metric::Size => s.push_str("set logscale y\n"),
                _ => s.push_str("unset logscale y\n"),
            }
            let _ = writeln!(
                s,
                "stats '{file}' skip 1 nooutput\nplot for [c=2:STATS_columns] '{file}' using 1:c with linespoints"
            );
        }
    }
    s.push_str("unset multiplot\n");
    s
}
