//! Binary CART trees with Gini impurity, grown best-first under a leaf
//! budget.
//!
//! Records with `value <= threshold` go left. Leaves predict the majority
//! class with ties going to class 0, and report `c1 / (c0 + c1)` as the
//! probability of class 1.

mod dot;
mod grow;
mod importance;
mod model;
mod split;

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schema::{FeatureSchema, Record};

pub use dot::export_dot;
pub use grow::grow;
pub use importance::{feature_importances, Importances};
pub use model::{deserialize, serialize, MODEL_FORMAT, MODEL_VERSION};
pub use split::{best_split, BestSplit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClassCounts {
    pub c0: usize,
    pub c1: usize,
}

impl ClassCounts {
    pub fn new(c0: usize, c1: usize) -> Self {
        Self { c0, c1 }
    }

    pub fn total(&self) -> usize {
        self.c0 + self.c1
    }

    pub fn add(&mut self, label: u8) {
        if label == 1 {
            self.c1 += 1;
        } else {
            self.c0 += 1;
        }
    }

    pub fn is_pure(&self) -> bool {
        self.c0 == 0 || self.c1 == 0
    }

    /// Majority class, ties to 0.
    pub fn majority(&self) -> u8 {
        u8::from(self.c1 > self.c0)
    }

    pub fn prob_positive<T: Scalar>(&self) -> T {
        T::ratio(self.c1, self.total())
    }

    pub fn gini<T: Scalar>(&self) -> Result<T> {
        gini(*self)
    }

    pub(crate) fn sum_of_squares(&self) -> u128 {
        let (a, b) = (self.c0 as u128, self.c1 as u128);
        a * a + b * b
    }
}

impl std::ops::Sub for ClassCounts {
    type Output = ClassCounts;

    fn sub(self, rhs: ClassCounts) -> ClassCounts {
        ClassCounts::new(self.c0 - rhs.c0, self.c1 - rhs.c1)
    }
}

/// Gini impurity `1 - p0^2 - p1^2`.
pub fn gini<T: Scalar>(counts: ClassCounts) -> Result<T> {
    let n = counts.total();
    if n == 0 {
        return Err(Error::InvalidParameter("gini of an empty node".into()));
    }
    let p0 = T::ratio(counts.c0, n);
    let p1 = T::ratio(counts.c1, n);
    Ok(T::one() - p0 * p0 - p1 * p1)
}

/// Gini of a node known to be non-empty.
pub(crate) fn gini_of<T: Scalar>(counts: ClassCounts) -> T {
    gini(counts).expect("non-empty node")
}

/// Upper bound on leaves. `Unbounded` stands for "no size limit".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeafBudget {
    Bounded(usize),
    Unbounded,
}

impl LeafBudget {
    pub fn allows(&self, leaves: usize) -> bool {
        match *self {
            LeafBudget::Bounded(k) => leaves <= k,
            LeafBudget::Unbounded => true,
        }
    }

    pub fn as_option(&self) -> Option<usize> {
        match *self {
            LeafBudget::Bounded(k) => Some(k),
            LeafBudget::Unbounded => None,
        }
    }
}

impl fmt::Display for LeafBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeafBudget::Bounded(k) => write!(f, "{k}"),
            LeafBudget::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Growth parameters. The split criterion is always Gini.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeParams {
    pub max_leaf_nodes: LeafBudget,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_leaf_nodes: LeafBudget::Unbounded,
            min_samples_split: 2,
            min_samples_leaf: 1,
        }
    }
}

impl TreeParams {
    pub fn with_max_leaf_nodes(max_leaf_nodes: usize) -> Self {
        Self {
            max_leaf_nodes: LeafBudget::Bounded(max_leaf_nodes),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let LeafBudget::Bounded(k) = self.max_leaf_nodes {
            if k < 2 {
                return Err(Error::InvalidParameter(format!(
                    "max_leaf_nodes must be at least 2, got {k}"
                )));
            }
        }
        if self.min_samples_split < 1 || self.min_samples_leaf < 1 {
            return Err(Error::InvalidParameter(
                "min_samples_split and min_samples_leaf must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRule<T> {
    pub feature: usize,
    pub threshold: T,
}

impl<T: Scalar> SplitRule<T> {
    pub fn goes_left(&self, values: &[i64]) -> bool {
        T::from_value(values[self.feature]) <= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch<T> {
    pub rule: SplitRule<T>,
    pub left: Box<Node<T>>,
    pub right: Box<Node<T>>,
}

/// A tree node: a leaf when `branch` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Node<T> {
    pub counts: ClassCounts,
    pub branch: Option<Branch<T>>,
}

impl<T: Scalar> Node<T> {
    pub fn leaf(counts: ClassCounts) -> Self {
        Self {
            counts,
            branch: None,
        }
    }

    pub fn internal(rule: SplitRule<T>, left: Node<T>, right: Node<T>) -> Self {
        let counts = ClassCounts::new(
            left.counts.c0 + right.counts.c0,
            left.counts.c1 + right.counts.c1,
        );
        Self {
            counts,
            branch: Some(Branch {
                rule,
                left: Box::new(left),
                right: Box::new(right),
            }),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.branch.is_none()
    }

    pub fn impurity(&self) -> T {
        gini_of(self.counts)
    }

    pub fn predicted_label(&self) -> u8 {
        self.counts.majority()
    }

    pub fn prob_positive(&self) -> T {
        self.counts.prob_positive()
    }

    /// Weighted impurity decrease of this node's split; zero for leaves.
    pub fn decrease(&self) -> T {
        match &self.branch {
            None => T::zero(),
            Some(b) => {
                let n = self.counts.total();
                self.impurity()
                    - T::ratio(b.left.counts.total(), n) * b.left.impurity()
                    - T::ratio(b.right.counts.total(), n) * b.right.impurity()
            }
        }
    }

    /// Pre-order traversal.
    pub fn walk(&self, visit: &mut impl FnMut(&Node<T>, usize)) {
        fn inner<T: Scalar>(n: &Node<T>, depth: usize, visit: &mut impl FnMut(&Node<T>, usize)) {
            visit(n, depth);
            if let Some(b) = &n.branch {
                inner(&b.left, depth + 1, visit);
                inner(&b.right, depth + 1, visit);
            }
        }
        inner(self, 0, visit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree<T> {
    pub root: Node<T>,
    pub schema: FeatureSchema,
    /// Sorted feature indices the learner was allowed to split on.
    pub active_features: Vec<usize>,
    pub params: TreeParams,
}

/// `(total_nodes, leaf_count)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeSize {
    pub total_nodes: usize,
    pub leaf_count: usize,
}

impl<T: Scalar> Tree<T> {
    fn check(&self, record: &Record) -> Result<()> {
        if record.values.len() != self.schema.len() {
            return Err(Error::SchemaMismatch(format!(
                "record has {} values, model expects {}",
                record.values.len(),
                self.schema.len()
            )));
        }
        Ok(())
    }

    /// The root-to-leaf path followed by `values`.
    pub fn path<'a>(&'a self, values: &[i64]) -> Vec<&'a Node<T>> {
        let mut node = &self.root;
        let mut path = vec![node];
        while let Some(b) = &node.branch {
            node = if b.rule.goes_left(values) {
                &b.left
            } else {
                &b.right
            };
            path.push(node);
        }
        path
    }

    pub fn leaf_for(&self, record: &Record) -> Result<&Node<T>> {
        self.check(record)?;
        Ok(self.path(&record.values).pop().expect("path is non-empty"))
    }

    pub fn predict_proba(&self, record: &Record) -> Result<T> {
        Ok(self.leaf_for(record)?.prob_positive())
    }

    pub fn predict_label(&self, record: &Record) -> Result<u8> {
        Ok(self.leaf_for(record)?.predicted_label())
    }

    pub fn size(&self) -> TreeSize {
        let (mut total, mut leaves) = (0, 0);
        self.root.walk(&mut |n, _| {
            total += 1;
            if n.is_leaf() {
                leaves += 1;
            }
        });
        TreeSize {
            total_nodes: total,
            leaf_count: leaves,
        }
    }

    pub fn depth(&self) -> usize {
        let mut d = 0;
        self.root.walk(&mut |_, depth| d = d.max(depth));
        d
    }

    /// Features used by at least one split, sorted.
    pub fn used_features(&self) -> Vec<usize> {
        let mut used = Vec::new();
        self.root.walk(&mut |n, _| {
            if let Some(b) = &n.branch {
                used.push(b.rule.feature);
            }
        });
        used.sort_unstable();
        used.dedup();
        used
    }

    pub fn feature_importances(&self) -> Importances<T> {
        feature_importances(self)
    }
}
