//! Hybrid treewidth / rank-width decompositions and the dynamic programs
//! that run on them.

mod bits;
pub mod compute;
pub mod decomposition;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod hybrid;
pub mod modulator;
pub mod oracles;
mod table;
pub mod twins;
pub mod vertex_set;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use graph::{Graph, Relabeled};
pub use vertex_set::VertexSet;
