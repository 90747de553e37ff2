//! Interval-valued probabilistic inference on influence diagrams whose
//! conditional distributions are given only by lower bounds.
//!
//! Upper bounds are implicit (`U_i = 1 - sum_{j != i} b_j`), so an interval
//! diagram stores exactly as many numbers as a point-valued one. Queries are
//! answered by node removal and arc reversal, each of which recomputes sharp
//! lower bounds for the affected node. The [`oracle`] module brute-forces the
//! same quantities over extreme points and is used to check the engine.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod format;
pub mod generate;
pub mod model;
pub mod oracle;
pub mod query;
pub mod transforms;

pub use error::{Error, Result};
pub use format::{load_diagram, validate_diagram, DiagramDoc, NodeDoc};
pub use model::{
    range, upper_bounds, BoundVector, InfluenceDiagram, LowerBoundTable, OutcomeSpace, ParentConfig, ProbInterval,
    ValidationReport, Violation,
};
pub use query::{answer, plan, prune_barren, Query, QueryResult};
pub use transforms::{
    marginal_lower_bounds, posterior_lower_bounds, remove_node, reverse_arc, PartitionedPredecessors, Step,
};
