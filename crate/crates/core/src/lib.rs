//! Colour Refinement (1-WL) with exact per-round iteration accounting,
//! string-encoded long-refinement graph families, and isomorph-free
//! exhaustive search over small graph orders.

pub mod cli;
pub mod codec;
pub mod families;
pub mod fixtures;
pub mod graph;
pub mod graph6;
pub mod partition;
pub mod refine;
pub mod search;

pub use graph::{DegreeSummary, Graph, GraphError};
pub use partition::Partition;
pub use refine::{ColouringTrace, RefinementEngine};
