//! Sweep over balance methods, leaf budgets and repeat seeds, each cell
//! running the full elimination loop.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use rodtree::cart::{export_dot, LeafBudget, TreeParams};
use rodtree::rfe::{self, RankingReport, RankingRun};
use rodtree::sampling::{BalanceMethod, Strategy};
use rodtree::{Dataset, RfeEntry};

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub balances: Vec<Strategy>,
    pub budgets: Vec<LeafBudget>,
    pub train_frac: f64,
    pub seed: u64,
    pub repeats: usize,
    /// Balance the whole dataset before splitting instead of balancing only
    /// the training part.
    pub paper_faithful: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub balance: Strategy,
    pub budget: LeafBudget,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub cell: Cell,
    /// Records the trees were trained on, after balancing.
    pub train_records: usize,
    pub test_records: usize,
    pub entries: Vec<RfeEntry>,
}

impl Experiment {
    /// Cells in output order: balance, then budget, then repeat.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &balance in &self.balances {
            for &budget in &self.budgets {
                for r in 0..self.repeats {
                    cells.push(Cell {
                        balance,
                        budget,
                        seed: self.seed + r as u64,
                    });
                }
            }
        }
        cells
    }

    pub fn run(&self, data: &Dataset) -> Result<Vec<CellResult>> {
        if self.balances.is_empty() || self.budgets.is_empty() || self.repeats == 0 {
            bail!("experiment has no cells");
        }
        let (n0, n1) = data.class_counts()?;
        if n0 == 0 || n1 == 0 {
            bail!("input has a single class (n0={n0}, n1={n1}); balancing and AUC are undefined");
        }
        self.cells()
            .into_par_iter()
            .map(|cell| self.run_cell(data, cell))
            .collect()
    }

    pub fn run_cell(&self, data: &Dataset, cell: Cell) -> Result<CellResult> {
        let params = TreeParams {
            max_leaf_nodes: cell.budget,
            ..TreeParams::default()
        };
        let method = BalanceMethod::new(cell.balance, cell.seed);
        let (train, test) = if self.paper_faithful {
            let balanced = method.apply(data)?;
            balanced.train_test_split(self.train_frac, cell.seed)?
        } else {
            let (train, test) = data.train_test_split(self.train_frac, cell.seed)?;
            (method.apply(&train)?, test)
        };
        let entries = rfe::eliminate(&train, &test, params).with_context(|| {
            format!(
                "balance={} max_leaf_nodes={} seed={}",
                cell.balance, cell.budget, cell.seed
            )
        })?;
        Ok(CellResult {
            cell,
            train_records: train.len(),
            test_records: test.len(),
            entries,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    pub balance: Strategy,
    pub max_leaf_nodes: LeafBudget,
    pub seed: u64,
    pub n_features: usize,
    pub total_nodes: usize,
    pub leaf_count: usize,
    pub auc: f64,
    pub f_measure: f64,
}

pub const LEDGER_HEADER: &str =
    "balance,max_leaf_nodes,seed,n_features,total_nodes,leaf_count,auc,f_measure";

pub fn ledger_rows(results: &[CellResult]) -> Vec<LedgerRow> {
    results
        .iter()
        .flat_map(|r| {
            r.entries.iter().map(move |e| LedgerRow {
                balance: r.cell.balance,
                max_leaf_nodes: r.cell.budget,
                seed: r.cell.seed,
                n_features: e.features_used.len(),
                total_nodes: e.tree_size.total_nodes,
                leaf_count: e.tree_size.leaf_count,
                auc: e.auc,
                f_measure: e.f_measure,
            })
        })
        .collect()
}

pub fn ledger_csv(rows: &[LedgerRow]) -> String {
    let mut out = String::from(LEDGER_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.balance,
            r.max_leaf_nodes,
            r.seed,
            r.n_features,
            r.total_nodes,
            r.leaf_count,
            r.auc,
            r.f_measure
        );
    }
    out
}

pub fn parse_ledger(text: &str) -> Result<Vec<LedgerRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == LEDGER_HEADER => {}
        Some(h) => bail!("unexpected ledger header {h:?}"),
        None => bail!("ledger is empty"),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 8 {
            bail!(
                "ledger line {line_no}: expected 8 fields, found {}",
                f.len()
            );
        }
        let budget = match f[1] {
            "unbounded" => LeafBudget::Unbounded,
            k => LeafBudget::Bounded(
                k.parse()
                    .with_context(|| format!("ledger line {line_no}: max_leaf_nodes"))?,
            ),
        };
        let num = |s: &str, what: &str| -> Result<usize> {
            s.parse()
                .with_context(|| format!("ledger line {line_no}: {what}"))
        };
        let real = |s: &str, what: &str| -> Result<f64> {
            s.parse()
                .with_context(|| format!("ledger line {line_no}: {what}"))
        };
        rows.push(LedgerRow {
            balance: f[0].parse()?,
            max_leaf_nodes: budget,
            seed: f[2]
                .parse()
                .with_context(|| format!("ledger line {line_no}: seed"))?,
            n_features: num(f[3], "n_features")?,
            total_nodes: num(f[4], "total_nodes")?,
            leaf_count: num(f[5], "leaf_count")?,
            auc: real(f[6], "auc")?,
            f_measure: real(f[7], "f_measure")?,
        });
    }
    Ok(rows)
}

fn budget_tag(b: LeafBudget) -> String {
    match b {
        LeafBudget::Bounded(k) => format!("k{k}"),
        LeafBudget::Unbounded => "kinf".into(),
    }
}

/// `(file name, DOT text)` for every trained tree.
pub fn dot_files(results: &[CellResult]) -> Vec<(String, String)> {
    results
        .iter()
        .flat_map(|r| {
            r.entries.iter().map(move |e| {
                (
                    format!(
                        "{}_{}_s{}_m{:02}.dot",
                        r.cell.balance,
                        budget_tag(r.cell.budget),
                        r.cell.seed,
                        e.features_used.len()
                    ),
                    export_dot(&e.tree),
                )
            })
        })
        .collect()
}

/// Per-cell ledgers in the elimination-loop format, one per file.
pub fn cell_ledgers(results: &[CellResult]) -> Vec<(String, String)> {
    results
        .iter()
        .map(|r| {
            let schema = &r.entries[0].tree.schema;
            (
                format!(
                    "rfe_{}_{}_s{}.csv",
                    r.cell.balance,
                    budget_tag(r.cell.budget),
                    r.cell.seed
                ),
                rfe::ledger_csv(&r.entries, schema),
            )
        })
        .collect()
}

pub fn rankings(results: &[CellResult]) -> Result<RankingReport> {
    let runs: Vec<RankingRun> = results
        .iter()
        .map(|r| RankingRun {
            strategy: r.cell.balance,
            config: format!("max_leaf_nodes={} seed={}", r.cell.budget, r.cell.seed),
            schema: r.entries[0].tree.schema.clone(),
            elimination_order: rfe::elimination_order(&r.entries),
        })
        .collect();
    Ok(rfe::aggregate_rankings(&runs)?)
}
