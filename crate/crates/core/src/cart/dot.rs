use std::fmt::Write;

use super::{Node, Tree};
use crate::scalar::Scalar;

/// Graphviz rendering of a tree. Node ids are `n0, n1, ...` in pre-order;
/// the left edge of a split is labeled `true` (the rule holds).
pub fn export_dot<T: Scalar>(tree: &Tree<T>) -> String {
    let mut out = String::new();
    out.push_str("digraph Tree {\n");
    out.push_str("    node [shape=box, style=\"rounded\", fontname=\"helvetica\"];\n");
    out.push_str("    edge [fontname=\"helvetica\"];\n");
    let mut next = 0usize;
    emit(tree, &tree.root, &mut next, &mut out);
    out.push_str("}\n");
    out
}

fn emit<T: Scalar>(tree: &Tree<T>, node: &Node<T>, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    let mut label = String::new();
    if let Some(b) = &node.branch {
        let _ = write!(
            label,
            "{} ≤ {}\\n",
            tree.schema.code(b.rule.feature),
            b.rule.threshold
        );
    }
    let _ = write!(
        label,
        "gini = {:.4}\\nsamples = {}\\nvalue = [{}, {}]\\nclass = {}",
        node.impurity().as_f64(),
        node.counts.total(),
        node.counts.c0,
        node.counts.c1,
        node.predicted_label()
    );
    let _ = writeln!(out, "    n{id} [label=\"{label}\"];");
    if let Some(b) = &node.branch {
        let l = emit(tree, &b.left, next, out);
        let _ = writeln!(out, "    n{id} -> n{l} [label=\"true\"];");
        let r = emit(tree, &b.right, next, out);
        let _ = writeln!(out, "    n{id} -> n{r} [label=\"false\"];");
    }
    id
}
