use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::split::{best_split, BestSplit, Gain};
use super::{ClassCounts, Node, SplitRule, Tree, TreeParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schema::{Dataset, Record};

struct ArenaNode<T> {
    counts: ClassCounts,
    children: Option<(SplitRule<T>, usize, usize)>,
}

struct Candidate<'a, T> {
    id: usize,
    records: Vec<&'a Record>,
    split: BestSplit<T>,
}

/// Heap key: larger gain first, then earlier creation.
#[derive(PartialEq, Eq)]
struct Priority(Gain, Reverse<usize>);

impl Ord for Priority {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Priority {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Grows a tree best-first: the frontier leaf whose best split has the
/// largest `n * decrease` is expanded next, until the leaf budget is reached
/// or no leaf has an admissible positive-gain split.
pub fn grow<T: Scalar>(
    train: &Dataset,
    active_features: &[usize],
    params: TreeParams,
) -> Result<Tree<T>> {
    params.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    // labels are required below
    train.labels()?;
    let mut features = active_features.to_vec();
    features.sort_unstable();
    features.dedup();
    if features.is_empty() {
        return Err(Error::EmptyFeatureSet);
    }
    if let Some(&f) = features.iter().find(|&&f| f >= train.schema.len()) {
        return Err(Error::InvalidParameter(format!(
            "feature index {f} outside schema of {} features",
            train.schema.len()
        )));
    }

    let mut arena: Vec<ArenaNode<T>> = Vec::new();
    let mut state = Frontier {
        features: &features,
        params: &params,
        arena: &mut arena,
        pending: Vec::new(),
        heap: BinaryHeap::new(),
    };
    state.admit(train.records.iter().collect());
    let mut leaves = 1usize;
    while params.max_leaf_nodes.allows(leaves + 1) {
        let Some((_, slot)) = state.heap.pop() else {
            break;
        };
        let cand = state.pending[slot].take().expect("candidate expanded once");
        let rule = cand.split.rule;
        let (left, right): (Vec<&Record>, Vec<&Record>) = cand
            .records
            .into_iter()
            .partition(|r| rule.goes_left(&r.values));
        debug_assert_eq!(left.len(), cand.split.left.total());
        debug_assert_eq!(right.len(), cand.split.right.total());
        let l = state.admit(left);
        let r = state.admit(right);
        state.arena[cand.id].children = Some((rule, l, r));
        leaves += 1;
    }

    Ok(Tree {
        root: assemble(&arena, 0),
        schema: train.schema.clone(),
        active_features: features,
        params,
    })
}

struct Frontier<'a, 'p, T> {
    features: &'p [usize],
    params: &'p TreeParams,
    arena: &'p mut Vec<ArenaNode<T>>,
    pending: Vec<Option<Candidate<'a, T>>>,
    heap: BinaryHeap<(Priority, usize)>,
}

impl<'a, T: Scalar> Frontier<'a, '_, T> {
    /// Creates a leaf for `records` and queues it if it can be split.
    fn admit(&mut self, records: Vec<&'a Record>) -> usize {
        let mut counts = ClassCounts::default();
        for r in &records {
            counts.add(r.label.unwrap_or(0));
        }
        let id = self.arena.len();
        self.arena.push(ArenaNode {
            counts,
            children: None,
        });
        if counts.is_pure() || records.len() < self.params.min_samples_split {
            return id;
        }
        if let Some(split) = best_split::<T>(&records, self.features, self.params.min_samples_leaf)
        {
            self.heap
                .push((Priority(split.gain, Reverse(id)), self.pending.len()));
            self.pending.push(Some(Candidate { id, records, split }));
        }
        id
    }
}

fn assemble<T: Scalar>(arena: &[ArenaNode<T>], id: usize) -> Node<T> {
    let node = &arena[id];
    match node.children {
        None => Node::leaf(node.counts),
        Some((rule, l, r)) => Node::internal(rule, assemble(arena, l), assemble(arena, r)),
    }
}
