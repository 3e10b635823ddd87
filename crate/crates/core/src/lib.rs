//! Interpretable decision trees for imbalanced binary classification.
//!
//! The crate covers the full pipeline used to study small, readable trees on
//! administrative offender data:
//!
//! * [`schema`]: the eleven integer-encoded ROD features, records, CSV I/O and
//!   seeded train/test splitting.
//! * [`sampling`]: under-sampling of the majority class and round-robin
//!   over-sampling of the minority class.
//! * [`cart`]: Gini-based CART induction grown best-first under a leaf budget,
//!   prediction, impurity-decrease importances, JSON model documents and DOT
//!   export.
//! * [`metrics`]: confusion counts, F-measure, ROC curve and AUC.
//! * [`rfe`]: the train / drop-least-important-feature loop and rank
//!   aggregation across runs.
//! * [`synth`]: a calibrated synthetic stand-in for the confidential data.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix the common
//! choices (`f64` by default, `f32`, and exact rationals for oracle work).

pub mod cart;
pub mod error;
pub mod metrics;
pub mod rfe;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod schema;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use schema::{Dataset, FeatureKind, FeatureSchema, FeatureSpec, Record};

/// Exact rational scalar, handy for checking arithmetic without rounding.
pub type Exact = num_rational::Ratio<i64>;

pub type Tree = cart::Tree<f64>;
pub type Tree32 = cart::Tree<f32>;
pub type ExactTree = cart::Tree<Exact>;
pub type Node = cart::Node<f64>;
pub type SplitRule = cart::SplitRule<f64>;
pub type Importances = cart::Importances<f64>;
pub type MetricsReport = metrics::MetricsReport<f64>;
pub type RfeEntry = rfe::RfeEntry<f64>;
