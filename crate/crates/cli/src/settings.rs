//! Flag and config-file resolution.
//!
//! The config file is flat `key=value` text whose keys are the long flag
//! names (`seed`, `out`, `paper-faithful`, `balance`, `train-frac`,
//! `max-leaf-nodes`, `features`, `repeats`, plus subcommand options such as
//! `input` or `n`). Blank lines and `#` comments are ignored. Flags given on
//! the command line win over the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rodtree::cart::LeafBudget;
use rodtree::sampling::Strategy;
use rodtree::FeatureSchema;

/// Leaf budgets swept when none are given.
pub const DEFAULT_BUDGETS: [usize; 8] = [2, 4, 8, 16, 32, 64, 128, 9999];
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRAIN_FRAC: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
            values.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Raw global flags as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct GlobalFlags {
    pub seed: Option<u64>,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub paper_faithful: bool,
    pub balance: Option<String>,
    pub train_frac: Option<f64>,
    pub max_leaf_nodes: Option<String>,
    pub features: Option<String>,
    pub repeats: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub out: PathBuf,
    pub paper_faithful: bool,
    /// `None` when not given; commands pick their own default.
    pub balance: Option<Vec<Strategy>>,
    pub train_frac: f64,
    pub budgets: Vec<LeafBudget>,
    pub budgets_given: bool,
    pub features: Option<String>,
    pub repeats: usize,
    pub file: ConfigFile,
}

impl Settings {
    pub fn resolve(flags: &GlobalFlags) -> Result<Self, UsageError> {
        let file = match &flags.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let pick =
            |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).map(String::from));

        let seed = match pick(flags.seed.map(|s| s.to_string()), "seed") {
            Some(s) => s
                .parse()
                .map_err(|_| usage(format!("seed {s:?} is not an integer")))?,
            None => DEFAULT_SEED,
        };
        let out = pick(flags.out.as_ref().map(|p| p.display().to_string()), "out")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        let paper_faithful = flags.paper_faithful
            || match file.get("paper-faithful") {
                None => false,
                Some("true" | "1" | "yes") => true,
                Some("false" | "0" | "no") => false,
                Some(other) => return Err(usage(format!("paper-faithful={other:?}"))),
            };
        let balance = pick(flags.balance.clone(), "balance")
            .map(|s| parse_balance(&s))
            .transpose()?;
        let train_frac = match pick(flags.train_frac.map(|f| f.to_string()), "train-frac") {
            Some(s) => {
                let f: f64 = s
                    .parse()
                    .map_err(|_| usage(format!("train-frac {s:?} is not a number")))?;
                if !(f > 0.0 && f < 1.0) {
                    return Err(usage(format!("train-frac {f} must be in (0, 1)")));
                }
                f
            }
            None => DEFAULT_TRAIN_FRAC,
        };
        let budget_text = pick(flags.max_leaf_nodes.clone(), "max-leaf-nodes");
        let budgets_given = budget_text.is_some();
        let budgets = match budget_text {
            Some(s) => parse_budgets(&s)?,
            None => DEFAULT_BUDGETS
                .iter()
                .map(|&k| LeafBudget::Bounded(k))
                .collect(),
        };
        let features = pick(flags.features.clone(), "features");
        let repeats = match pick(flags.repeats.map(|r| r.to_string()), "repeats") {
            Some(s) => match s.parse::<usize>() {
                Ok(r) if r >= 1 => r,
                _ => return Err(usage(format!("repeats {s:?} must be a positive integer"))),
            },
            None => 1,
        };
        Ok(Self {
            seed,
            out,
            paper_faithful,
            balance,
            train_frac,
            budgets,
            budgets_given,
            features,
            repeats,
            file,
        })
    }

    pub fn balances_or_all(&self) -> Vec<Strategy> {
        self.balance
            .clone()
            .unwrap_or_else(|| Strategy::ALL.to_vec())
    }

    pub fn single_balance(&self, default: Strategy) -> Result<Strategy, UsageError> {
        match self.balance.as_deref() {
            None => Ok(default),
            Some([b]) => Ok(*b),
            Some(_) => Err(usage("this command takes a single --balance method")),
        }
    }

    pub fn single_budget(&self, default: LeafBudget) -> Result<LeafBudget, UsageError> {
        if self.budgets_given {
            match self.budgets.as_slice() {
                [k] => Ok(*k),
                _ => Err(usage("this command takes a single --max-leaf-nodes value")),
            }
        } else {
            Ok(default)
        }
    }

    pub fn feature_indices(&self, schema: &FeatureSchema) -> Result<Vec<usize>, UsageError> {
        match &self.features {
            None => Ok((0..schema.len()).collect()),
            Some(list) => schema
                .parse_feature_list(list)
                .map_err(|e| usage(format!("--features: {e}"))),
        }
    }

    /// A subcommand option: the flag value if given, else the config entry.
    pub fn option(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.file.get(key).map(String::from))
    }
}

pub fn parse_balance(s: &str) -> Result<Vec<Strategy>, UsageError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let b: Strategy = part.parse().map_err(|e| usage(format!("--balance: {e}")))?;
        if !out.contains(&b) {
            out.push(b);
        }
    }
    if out.is_empty() {
        return Err(usage("--balance is empty"));
    }
    Ok(out)
}

pub fn parse_budgets(s: &str) -> Result<Vec<LeafBudget>, UsageError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let b = match part {
            "unbounded" | "none" => LeafBudget::Unbounded,
            n => match n.parse::<usize>() {
                Ok(k) if k >= 2 => LeafBudget::Bounded(k),
                _ => {
                    return Err(usage(format!(
                        "--max-leaf-nodes: {n:?} must be an integer >= 2 or \"unbounded\""
                    )))
                }
            },
        };
        out.push(b);
    }
    if out.is_empty() {
        return Err(usage("--max-leaf-nodes is empty"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.conf");
        std::fs::write(
            &path,
            "# sweep\nseed=7\nbalance=under\nmax_leaf_nodes=2,4\nrepeats=3\npaper-faithful=true\n",
        )
        .unwrap();
        let flags = GlobalFlags {
            config: Some(path),
            seed: Some(9),
            ..GlobalFlags::default()
        };
        let s = Settings::resolve(&flags).unwrap();
        assert_eq!(s.seed, 9);
        assert_eq!(s.balance, Some(vec![Strategy::Under]));
        assert_eq!(
            s.budgets,
            vec![LeafBudget::Bounded(2), LeafBudget::Bounded(4)]
        );
        assert_eq!(s.repeats, 3);
        assert!(s.paper_faithful);
    }

    #[test]
    fn defaults() {
        let s = Settings::resolve(&GlobalFlags::default()).unwrap();
        assert_eq!(s.seed, DEFAULT_SEED);
        assert_eq!(s.train_frac, 0.7);
        assert_eq!(s.budgets.len(), 8);
        assert_eq!(s.balances_or_all(), vec![Strategy::Under, Strategy::Over]);
        assert_eq!(
            s.single_budget(LeafBudget::Unbounded).unwrap(),
            LeafBudget::Unbounded
        );
    }

    #[test]
    fn bad_values_are_usage_errors() {
        assert!(parse_budgets("1").is_err());
        assert!(parse_budgets("4,x").is_err());
        assert_eq!(
            parse_budgets("unbounded").unwrap(),
            vec![LeafBudget::Unbounded]
        );
        assert!(parse_balance("smote").is_err());
        let flags = GlobalFlags {
            train_frac: Some(1.5),
            ..GlobalFlags::default()
        };
        assert!(Settings::resolve(&flags).is_err());
        assert!(ConfigFile::parse("novalue").is_err());
    }
}
