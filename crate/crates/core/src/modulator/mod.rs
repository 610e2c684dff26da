//! Dynamic programs over a rank decomposition of `G - X` for a modulator `X`.
//!
//! Each program walks the decomposition bottom-up. Records at a node only
//! refer to twin classes of the vertices below it, so the tables stay small
//! while the decomposition has low width.

mod maxcut;
mod paths;
mod precolor;

pub use maxcut::{maxcut_extension, CutExtension};
pub use paths::disjoint_paths_cover;
pub use precolor::{precoloring_extension, Precoloring};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::twins::TwinContext;

/// What an internal node needs to know about its two children.
pub(crate) struct Join {
    pub left: usize,
    pub right: usize,
    pub lift_left: Vec<usize>,
    pub lift_right: Vec<usize>,
    /// Link rows from the left child's classes to the right child's.
    pub rows: Vec<u64>,
}

pub(crate) enum Step {
    Leaf(usize),
    Join(Join),
}

/// The nodes of the decomposition in postorder with their step data.
pub(crate) fn schedule(g: &Graph, ctx: &TwinContext) -> Result<Vec<(usize, Step)>> {
    ctx.rd
        .postorder()
        .into_iter()
        .map(|t| {
            let node = &ctx.rd.nodes[t];
            let step = match (node.vertex, node.children.as_slice()) {
                (Some(v), []) => Step::Leaf(v),
                (None, &[left, right]) => Step::Join(Join {
                    left,
                    right,
                    lift_left: ctx.lift_compact(left, t)?,
                    lift_right: ctx.lift_compact(right, t)?,
                    rows: ctx.link_rows(g, left, right)?,
                }),
                _ => {
                    return Err(Error::internal(format!(
                        "malformed rank decomposition node {t}"
                    )))
                }
            };
            Ok((t, step))
        })
        .collect()
}
