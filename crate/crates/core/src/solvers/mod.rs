//! Exact deciders used both to compute assignments and as ground truth,
//! plus instance types, the tree partition procedure and subset graphs.

mod exact;
mod instance;
mod tree;

pub use exact::*;
pub use instance::*;
pub use tree::*;
