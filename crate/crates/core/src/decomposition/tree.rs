use std::fmt;

use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// A rooted tree decomposition. Node 0 is the root; bags are sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub children: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one; 0 when there are no nonempty bags.
    pub fn width(&self) -> usize {
        bag_width(self.bags.iter().map(Vec::len))
    }

    /// Maps every vertex through `f`, keeping bags sorted.
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self {
            bags: self
                .bags
                .iter()
                .map(|b| {
                    let mut nb: Vec<usize> = b.iter().map(|&v| f(v)).collect();
                    nb.sort_unstable();
                    nb
                })
                .collect(),
            children: self.children.clone(),
        }
    }
}

pub(crate) fn bag_width(sizes: impl Iterator<Item = usize>) -> usize {
    sizes.max().unwrap_or(0).saturating_sub(1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    Structure(String),
    MalformedBag { node: usize },
    VertexOutOfRange { node: usize, vertex: usize },
    VertexMissing { vertex: usize },
    EdgeUncovered { u: usize, v: usize },
    VertexDisconnected { vertex: usize },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::Structure(msg) => write!(f, "tree structure: {msg}"),
            TdViolation::MalformedBag { node } => write!(f, "bag of node {node} not sorted/unique"),
            TdViolation::VertexOutOfRange { node, vertex } => {
                write!(f, "bag of node {node} holds unknown vertex {vertex}")
            }
            TdViolation::VertexMissing { vertex } => write!(f, "vertex {vertex} in no bag"),
            TdViolation::EdgeUncovered { u, v } => write!(f, "edge {{{u},{v}}} uncovered"),
            TdViolation::VertexDisconnected { vertex } => {
                write!(f, "nodes containing vertex {vertex} are disconnected")
            }
        }
    }
}

/// Checks that `children` describes a tree rooted at node 0 that reaches
/// every node exactly once. Returns the parent array.
pub(crate) fn check_rooted_tree(children: &[Vec<usize>]) -> Result<Vec<Option<usize>>, String> {
    let n = children.len();
    let mut parent = vec![None; n];
    if n == 0 {
        return Ok(parent);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut reached = 1;
    while let Some(t) = stack.pop() {
        for &c in &children[t] {
            if c >= n {
                return Err(format!("node {t} has unknown child {c}"));
            }
            if seen[c] {
                return Err(format!("node {c} reached twice"));
            }
            seen[c] = true;
            parent[c] = Some(t);
            reached += 1;
            stack.push(c);
        }
    }
    if reached != n {
        let lost = seen.iter().position(|s| !s).unwrap_or(0);
        return Err(format!("node {lost} unreachable from the root"));
    }
    Ok(parent)
}

/// Checks both tree-decomposition properties of `td` against `g`.
///
/// Every vertex must appear in a bag, every edge must be covered and the
/// nodes holding a vertex must form a connected subtree.
pub fn validate_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> Vec<TdViolation> {
    let mut out = Vec::new();
    if td.bags.len() != td.children.len() {
        out.push(TdViolation::Structure(format!(
            "{} bags for {} nodes",
            td.bags.len(),
            td.children.len()
        )));
        return out;
    }
    let parent = match check_rooted_tree(&td.children) {
        Ok(p) => p,
        Err(msg) => {
            out.push(TdViolation::Structure(msg));
            return out;
        }
    };
    if td.is_empty() {
        if g.n() > 0 {
            out.push(TdViolation::Structure(
                "no nodes for a nonempty graph".into(),
            ));
        }
        return out;
    }
    let n = g.n();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sets = Vec::with_capacity(td.len());
    for (t, bag) in td.bags.iter().enumerate() {
        if bag.windows(2).any(|w| w[0] >= w[1]) {
            out.push(TdViolation::MalformedBag { node: t });
        }
        let mut s = VertexSet::new();
        for &v in bag {
            if v >= n {
                out.push(TdViolation::VertexOutOfRange { node: t, vertex: v });
            } else {
                s.insert(v);
                holders[v].push(t);
            }
        }
        sets.push(s);
    }
    for (v, h) in holders.iter().enumerate() {
        if h.is_empty() {
            out.push(TdViolation::VertexMissing { vertex: v });
        }
    }
    for (u, v) in g.edges() {
        if !holders[u].iter().any(|&t| sets[t].contains(v)) {
            out.push(TdViolation::EdgeUncovered { u, v });
        }
    }
    // Connected iff exactly one holder has a parent that is not a holder.
    for (v, h) in holders.iter().enumerate() {
        let tops = h
            .iter()
            .filter(|&&t| parent[t].is_none_or(|p| !sets[p].contains(v)))
            .count();
        if tops > 1 {
            out.push(TdViolation::VertexDisconnected { vertex: v });
        }
    }
    out
}
