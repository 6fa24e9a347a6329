//! Two disjoint shortest paths in undirected graphs with non-negative lengths.

pub mod dpp_mixed;
pub mod dpp_undirected;
pub mod dspp2;
pub mod error;
pub mod expansion;
pub mod fixtures;
pub mod format;
pub mod generator;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod relation;

pub use error::{Error, Result};
