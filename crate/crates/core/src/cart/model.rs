//! JSON model documents.
//!
//! ```json
//! {
//!   "format": "rodtree-model",
//!   "version": 1,
//!   "schema": [{"code": "G", "name": "Gender", "kind": "binary", "min": 0, "max": 1}, ...],
//!   "active_features": ["PC", "PO", "PP"],
//!   "params": {"criterion": "gini", "max_leaf_nodes": 4, "min_samples_split": 2, "min_samples_leaf": 1},
//!   "root": {"kind": "internal", "feature": "PP", "threshold": 0.5, "counts": [70, 30],
//!            "children": [{"kind": "leaf", "counts": [60, 10]}, {"kind": "leaf", "counts": [10, 20]}]}
//! }
//! ```
//!
//! Node objects carry exactly `kind`, `feature`, `threshold`, `counts` and
//! `children`; leaves omit the split fields.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ClassCounts, LeafBudget, Node, SplitRule, Tree, TreeParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schema::{FeatureKind, FeatureSchema, FeatureSpec};

pub const MODEL_FORMAT: &str = "rodtree-model";
pub const MODEL_VERSION: u64 = 1;

#[derive(Serialize)]
struct DocOut<'a, T> {
    format: &'static str,
    version: u64,
    schema: Vec<SpecDoc>,
    active_features: Vec<&'a str>,
    params: ParamsDoc,
    root: NodeOut<T>,
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    code: String,
    name: String,
    kind: String,
    min: i64,
    max: i64,
}

#[derive(Serialize, Deserialize)]
struct ParamsDoc {
    criterion: String,
    max_leaf_nodes: Option<usize>,
    min_samples_split: usize,
    min_samples_leaf: usize,
}

#[derive(Serialize)]
struct NodeOut<T> {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    feature: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<T>,
    counts: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    children: Option<Vec<NodeOut<T>>>,
}

fn kind_name(kind: FeatureKind) -> &'static str {
    match kind {
        FeatureKind::Binary => "binary",
        FeatureKind::OrdinalCategory => "ordinal",
        FeatureKind::Count => "count",
    }
}

fn node_out<T: Scalar>(node: &Node<T>, schema: &FeatureSchema) -> NodeOut<T> {
    let counts = [node.counts.c0, node.counts.c1];
    match &node.branch {
        None => NodeOut {
            kind: "leaf",
            feature: None,
            threshold: None,
            counts,
            children: None,
        },
        Some(b) => NodeOut {
            kind: "internal",
            feature: Some(schema.code(b.rule.feature).to_string()),
            threshold: Some(b.rule.threshold),
            counts,
            children: Some(vec![node_out(&b.left, schema), node_out(&b.right, schema)]),
        },
    }
}

/// Writes the model document. Floating thresholds use the shortest decimal
/// that parses back to the same value.
pub fn serialize<T: Scalar + Serialize>(tree: &Tree<T>) -> String {
    let doc = DocOut {
        format: MODEL_FORMAT,
        version: MODEL_VERSION,
        schema: tree
            .schema
            .features()
            .iter()
            .map(|f| SpecDoc {
                code: f.code.clone(),
                name: f.name.clone(),
                kind: kind_name(f.kind).to_string(),
                min: f.min,
                max: f.max,
            })
            .collect(),
        active_features: tree
            .active_features
            .iter()
            .map(|&i| tree.schema.code(i))
            .collect(),
        params: ParamsDoc {
            criterion: "gini".into(),
            max_leaf_nodes: tree.params.max_leaf_nodes.as_option(),
            min_samples_split: tree.params.min_samples_split,
            min_samples_leaf: tree.params.min_samples_leaf,
        },
        root: node_out(&tree.root, &tree.schema),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("model serializes");
    out.push('\n');
    out
}

pub fn deserialize<T: Scalar + DeserializeOwned>(doc: &str) -> Result<Tree<T>> {
    let mut de = serde_json::Deserializer::from_str(doc);
    de.disable_recursion_limit();
    let value = Value::deserialize(&mut de).map_err(|e| Error::model("$", e.to_string()))?;
    de.end().map_err(|e| Error::model("$", e.to_string()))?;

    let obj = value
        .as_object()
        .ok_or_else(|| Error::model("$", "document is not an object"))?;
    match obj.get("format").and_then(Value::as_str) {
        Some(MODEL_FORMAT) => {}
        _ => {
            return Err(Error::model(
                "$.format",
                format!("expected {MODEL_FORMAT:?}"),
            ))
        }
    }
    match obj.get("version").and_then(Value::as_u64) {
        Some(MODEL_VERSION) => {}
        other => {
            return Err(Error::model(
                "$.version",
                format!("unsupported version {other:?}"),
            ))
        }
    }

    let schema = parse_schema(obj.get("schema"))?;
    let params = parse_params(obj.get("params"))?;
    let active = obj
        .get("active_features")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::model("$.active_features", "expected an array"))?;
    let mut active_features = Vec::with_capacity(active.len());
    for (i, code) in active.iter().enumerate() {
        let path = format!("$.active_features[{i}]");
        let code = code
            .as_str()
            .ok_or_else(|| Error::model(&path, "expected a feature code"))?;
        let idx = schema
            .index_of(code)
            .ok_or_else(|| Error::model(&path, format!("unknown feature {code}")))?;
        active_features.push(idx);
    }
    active_features.sort_unstable();
    active_features.dedup();

    let root_value = obj
        .get("root")
        .ok_or_else(|| Error::model("$.root", "missing"))?;
    let root = parse_node(root_value, "$.root", &schema, &active_features)?;
    Ok(Tree {
        root,
        schema,
        active_features,
        params,
    })
}

fn parse_schema(v: Option<&Value>) -> Result<FeatureSchema> {
    let v = v.ok_or_else(|| Error::model("$.schema", "missing"))?;
    let specs: Vec<SpecDoc> =
        serde_json::from_value(v.clone()).map_err(|e| Error::model("$.schema", e.to_string()))?;
    let mut features = Vec::with_capacity(specs.len());
    for (i, s) in specs.into_iter().enumerate() {
        let kind = match s.kind.as_str() {
            "binary" => FeatureKind::Binary,
            "ordinal" => FeatureKind::OrdinalCategory,
            "count" => FeatureKind::Count,
            other => {
                return Err(Error::model(
                    &format!("$.schema[{i}].kind"),
                    format!("unknown kind {other:?}"),
                ))
            }
        };
        features.push(FeatureSpec {
            code: s.code,
            name: s.name,
            kind,
            min: s.min,
            max: s.max,
        });
    }
    FeatureSchema::new(features).map_err(|e| Error::model("$.schema", e.to_string()))
}

fn parse_params(v: Option<&Value>) -> Result<TreeParams> {
    let v = v.ok_or_else(|| Error::model("$.params", "missing"))?;
    let p: ParamsDoc =
        serde_json::from_value(v.clone()).map_err(|e| Error::model("$.params", e.to_string()))?;
    if p.criterion != "gini" {
        return Err(Error::model("$.params.criterion", "only gini is supported"));
    }
    let params = TreeParams {
        max_leaf_nodes: match p.max_leaf_nodes {
            Some(k) => LeafBudget::Bounded(k),
            None => LeafBudget::Unbounded,
        },
        min_samples_split: p.min_samples_split,
        min_samples_leaf: p.min_samples_leaf,
    };
    params
        .validate()
        .map_err(|e| Error::model("$.params", e.to_string()))?;
    Ok(params)
}

fn parse_node<T: Scalar + DeserializeOwned>(
    v: &Value,
    path: &str,
    schema: &FeatureSchema,
    active: &[usize],
) -> Result<Node<T>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::model(path, "node is not an object"))?;
    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "kind" | "feature" | "threshold" | "counts" | "children"
        ) {
            return Err(Error::model(path, format!("unexpected field {key:?}")));
        }
    }
    let counts = match obj
        .get("counts")
        .and_then(Value::as_array)
        .map(Vec::as_slice)
    {
        Some([a, b]) => match (a.as_u64(), b.as_u64()) {
            (Some(a), Some(b)) => ClassCounts::new(a as usize, b as usize),
            _ => return Err(Error::model(path, "counts must be nonnegative integers")),
        },
        Some(_) => return Err(Error::model(path, "counts must have two entries")),
        None => return Err(Error::model(path, "missing counts")),
    };
    if counts.total() == 0 {
        return Err(Error::model(path, "node has no records"));
    }

    match obj.get("kind").and_then(Value::as_str) {
        Some("leaf") => {
            if obj.contains_key("children") || obj.contains_key("feature") {
                return Err(Error::model(path, "leaf carries split fields"));
            }
            Ok(Node::leaf(counts))
        }
        Some("internal") => {
            let code = obj
                .get("feature")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::model(path, "missing feature"))?;
            let feature = schema
                .index_of(code)
                .ok_or_else(|| Error::model(path, format!("unknown feature {code}")))?;
            if !active.contains(&feature) {
                return Err(Error::model(
                    path,
                    format!("feature {code} is not an active feature"),
                ));
            }
            let threshold = obj
                .get("threshold")
                .ok_or_else(|| Error::model(path, "missing threshold"))
                .and_then(|t| {
                    T::deserialize(t).map_err(|e| Error::model(path, format!("threshold: {e}")))
                })?;
            let children = match obj
                .get("children")
                .and_then(Value::as_array)
                .map(Vec::as_slice)
            {
                Some([l, r]) => (l, r),
                _ => return Err(Error::model(path, "internal node needs two children")),
            };
            let left = parse_node(children.0, &format!("{path}.children[0]"), schema, active)?;
            let right = parse_node(children.1, &format!("{path}.children[1]"), schema, active)?;
            let node = Node::internal(SplitRule { feature, threshold }, left, right);
            if node.counts != counts {
                return Err(Error::model(
                    path,
                    "counts differ from the sum of the children's counts",
                ));
            }
            Ok(node)
        }
        Some(other) => Err(Error::model(path, format!("unknown kind {other:?}"))),
        None => Err(Error::model(path, "missing kind")),
    }
}
