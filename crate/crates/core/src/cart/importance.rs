use super::Tree;
use crate::scalar::Scalar;

/// Normalized mean-decrease-in-impurity per schema feature.
#[derive(Debug, Clone, PartialEq)]
pub struct Importances<T> {
    pub values: Vec<T>,
    /// Set for single-leaf trees, whose importances are all zero.
    pub no_splits: bool,
}

impl<T: Scalar> Importances<T> {
    pub fn get(&self, feature: usize) -> T {
        self.values[feature]
    }
}

/// Sums `(n_node / n_root) * decrease` over each feature's splits, then
/// normalizes to one.
pub fn feature_importances<T: Scalar>(tree: &Tree<T>) -> Importances<T> {
    let m = tree.schema.len();
    let mut raw = vec![T::zero(); m];
    let n_root = tree.root.counts.total();
    let mut splits = 0usize;
    tree.root.walk(&mut |node, _| {
        if let Some(b) = &node.branch {
            splits += 1;
            let w = T::ratio(node.counts.total(), n_root);
            raw[b.rule.feature] = raw[b.rule.feature] + w * node.decrease();
        }
    });
    let total = raw.iter().fold(T::zero(), |acc, &v| acc + v);
    if splits == 0 || total <= T::zero() {
        return Importances {
            values: vec![T::zero(); m],
            no_splits: true,
        };
    }
    Importances {
        values: raw.into_iter().map(|v| v / total).collect(),
        no_splits: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cart::{ClassCounts, Node, SplitRule, TreeParams};
    use crate::schema::FeatureSchema;
    use crate::Exact;

    fn rod_tree<T: Scalar>(root: Node<T>) -> Tree<T> {
        Tree {
            root,
            schema: FeatureSchema::rod(),
            active_features: (0..11).collect(),
            params: TreeParams::default(),
        }
    }

    const PC: usize = 6;
    const PP: usize = 10;

    #[test]
    fn stump_puts_all_weight_on_its_feature() {
        let t = rod_tree::<f64>(Node::internal(
            SplitRule {
                feature: PP,
                threshold: 0.5,
            },
            Node::leaf(ClassCounts::new(90, 10)),
            Node::leaf(ClassCounts::new(20, 80)),
        ));
        let imp = t.feature_importances();
        assert!(!imp.no_splits);
        assert_eq!(imp.get(PP), 1.0);
        assert_eq!(imp.values.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn single_leaf_has_zero_importances() {
        let t = rod_tree::<f64>(Node::leaf(ClassCounts::new(4, 4)));
        let imp = t.feature_importances();
        assert!(imp.no_splits);
        assert!(imp.values.iter().all(|&v| v == 0.0));
    }

    fn two_split_tree<T: Scalar>() -> Tree<T> {
        let right = Node::internal(
            SplitRule {
                feature: PC,
                threshold: T::from_value(3) * T::half(),
            },
            Node::leaf(ClassCounts::new(10, 15)),
            Node::leaf(ClassCounts::new(0, 25)),
        );
        rod_tree(Node::internal(
            SplitRule {
                feature: PP,
                threshold: T::half(),
            },
            Node::leaf(ClassCounts::new(40, 10)),
            right,
        ))
    }

    #[test]
    fn two_split_tree_normalizes_contributions() {
        // root (50,50) -> (40,10) | (10,40): 0.5 - 0.5*0.32 - 0.5*0.32 = 0.18
        // right (10,40) -> (10,15) | (0,25): 0.5 * (0.32 - 0.5*0.48) = 0.04
        let imp = two_split_tree::<Exact>().feature_importances();
        assert_eq!(imp.get(PP), Exact::new(18, 22));
        assert_eq!(imp.get(PC), Exact::new(4, 22));

        let imp = two_split_tree::<f64>().feature_importances();
        assert!((imp.get(PP) - 18.0 / 22.0).abs() < 1e-12);
        assert!((imp.values.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
