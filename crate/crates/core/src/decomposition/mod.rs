//! Tree decompositions, rank decompositions and nice decompositions of a
//! torso with boundary leaves, together with their validators.

mod nice;
mod rank;
mod tree;

pub use nice::{
    validate_nice_h_decomposition, Component, NiceHTreeDecomposition, NiceNode, NodeKind, Violation,
};
pub use rank::{validate_rank_decomposition, RankDecomposition, RdNode, RdReport, RdViolation};
pub use tree::{validate_tree_decomposition, TdViolation, TreeDecomposition};
