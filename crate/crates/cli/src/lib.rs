//! Experiment runner and helpers behind the `rodtree` command line tool.

pub mod ask;
pub mod experiment;
pub mod figures;
pub mod settings;

pub use experiment::{Experiment, LedgerRow};
pub use settings::{Settings, UsageError};
