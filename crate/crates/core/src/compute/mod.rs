//! Exact desk-scale computation of widths and decompositions.

mod assemble;
mod nicify;
mod rankwidth;
mod torso;
mod treewidth;

pub use assemble::assemble_rank_decomposition;
pub use nicify::nicify;
pub use rankwidth::{exact_rankwidth, exact_rankwidth_limited};
pub use torso::{find_rc_torso, find_rc_torso_limited, torso_result_for, TorsoResult};
pub use treewidth::{exact_treewidth, exact_treewidth_limited, treewidth_at_most};

/// Vertex-count limits of the exponential routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub treewidth: usize,
    pub rankwidth: usize,
    pub torso: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            treewidth: 20,
            rankwidth: 14,
            torso: 16,
        }
    }
}
