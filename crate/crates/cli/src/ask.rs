//! Questionnaire mode: walk a tree asking only for the features on the
//! path actually taken.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use anyhow::{anyhow, bail, Context, Result};

use rodtree::Tree;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub label: u8,
    pub prob_positive: f64,
    /// Feature indices asked, in order.
    pub asked: Vec<usize>,
}

/// Parses `"PP=1,PC=3"` into feature index → value.
pub fn parse_answers(tree: &Tree, text: &str) -> Result<BTreeMap<usize, i64>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (code, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("answer {part:?} is not CODE=VALUE"))?;
        let idx = tree
            .schema
            .index_of(code)
            .ok_or_else(|| anyhow!("unknown feature {code:?}"))?;
        let v: i64 = value
            .trim()
            .parse()
            .with_context(|| format!("answer for {code} is not an integer"))?;
        out.insert(idx, v);
    }
    Ok(out)
}

/// Walks `tree`. With `answers`, values come from the map and an
/// out-of-range or missing answer is an error; otherwise each question is
/// read from `input`, re-asking until the value is in range.
pub fn run<R: BufRead, W: Write>(
    tree: &Tree,
    answers: Option<&BTreeMap<usize, i64>>,
    mut input: R,
    out: &mut W,
) -> Result<Outcome> {
    let mut node = &tree.root;
    let mut asked = Vec::new();
    let mut known: BTreeMap<usize, i64> = BTreeMap::new();
    while let Some(b) = &node.branch {
        let f = b.rule.feature;
        let spec = tree.schema.feature(f);
        let value = match known.get(&f) {
            Some(&v) => v,
            None => {
                asked.push(f);
                let v = match answers {
                    Some(map) => {
                        let v = *map
                            .get(&f)
                            .ok_or_else(|| anyhow!("no answer given for {}", spec.code))?;
                        if !spec.contains(v) {
                            bail!(
                                "answer {v} for {} outside [{}, {}]",
                                spec.code,
                                spec.min,
                                spec.max
                            );
                        }
                        writeln!(out, "Q{}. {} ({}) = {v}", asked.len(), spec.name, spec.code)?;
                        v
                    }
                    None => prompt(&mut input, out, asked.len(), spec)?,
                };
                known.insert(f, v);
                v
            }
        };
        let values: Vec<i64> = (0..tree.schema.len())
            .map(|i| if i == f { value } else { 0 })
            .collect();
        let holds = b.rule.goes_left(&values);
        writeln!(
            out,
            "    {} ≤ {} is {}",
            spec.code,
            b.rule.threshold,
            if holds { "true" } else { "false" }
        )?;
        node = if holds { &b.left } else { &b.right };
    }
    let outcome = Outcome {
        label: node.predicted_label(),
        prob_positive: node.prob_positive(),
        asked,
    };
    writeln!(
        out,
        "leaf: value = [{}, {}]  p(y=1) = {:.4}  label = {}",
        node.counts.c0, node.counts.c1, outcome.prob_positive, outcome.label
    )?;
    Ok(outcome)
}

fn prompt<R: BufRead, W: Write>(
    input: &mut R,
    out: &mut W,
    number: usize,
    spec: &rodtree::FeatureSpec,
) -> Result<i64> {
    loop {
        write!(
            out,
            "Q{number}. {} ({}) [{}..{}]? ",
            spec.name, spec.code, spec.min, spec.max
        )?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            bail!("input ended before {} was answered", spec.code);
        }
        match line.trim().parse::<i64>() {
            Ok(v) if spec.contains(v) => return Ok(v),
            _ => writeln!(
                out,
                "  please enter an integer between {} and {}",
                spec.min, spec.max
            )?,
        }
    }
}
