use std::fmt;

use super::tree::check_rooted_tree;
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// A node of a rank decomposition: a leaf carries a vertex, an internal
/// node has exactly two children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdNode {
    pub children: Vec<usize>,
    pub vertex: Option<usize>,
}

impl RdNode {
    pub fn leaf(v: usize) -> Self {
        Self {
            children: Vec::new(),
            vertex: Some(v),
        }
    }

    pub fn internal(a: usize, b: usize) -> Self {
        Self {
            children: vec![a, b],
            vertex: None,
        }
    }
}

/// Rooted binary tree whose leaves are in bijection with a vertex set.
///
/// Node 0 is the root. Leaves carry vertex ids of the graph the
/// decomposition was built for; `width` is the cached maximum cut-rank over
/// all tree edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankDecomposition {
    pub nodes: Vec<RdNode>,
    pub width: usize,
}

impl RankDecomposition {
    pub fn single(v: usize) -> Self {
        Self {
            nodes: vec![RdNode::leaf(v)],
            width: 0,
        }
    }

    /// Joins two decompositions under a fresh root. The cached width is
    /// left at the larger of the two and must be refreshed by the caller.
    pub fn join(left: &Self, right: &Self) -> Self {
        if left.nodes.is_empty() {
            return right.clone();
        }
        if right.nodes.is_empty() {
            return left.clone();
        }
        let a = 1;
        let b = 1 + left.nodes.len();
        let mut nodes = Vec::with_capacity(b + right.nodes.len());
        nodes.push(RdNode::internal(a, b));
        for (off, part) in [(a, left), (b, right)] {
            nodes.extend(part.nodes.iter().map(|n| RdNode {
                children: n.children.iter().map(|&c| c + off).collect(),
                vertex: n.vertex,
            }));
        }
        Self {
            nodes,
            width: left.width.max(right.width),
        }
    }

    /// A caterpillar over `order`: the first two vertices share the deepest
    /// node and every later vertex hangs off the spine.
    pub fn caterpillar(order: &[usize]) -> Self {
        let mut rd = Self::default();
        for &v in order {
            rd = Self::join(&rd, &Self::single(v));
        }
        rd
    }

    /// Drops the leaf of `v` and contracts its parent. The cached width is
    /// kept as an upper bound.
    pub fn without_vertex(&self, v: usize) -> Self {
        fn rebuild(rd: &RankDecomposition, t: usize, v: usize) -> RankDecomposition {
            let node = &rd.nodes[t];
            match node.vertex {
                Some(w) if w == v => RankDecomposition::default(),
                Some(w) => RankDecomposition::single(w),
                None => RankDecomposition::join(
                    &rebuild(rd, node.children[0], v),
                    &rebuild(rd, node.children[1], v),
                ),
            }
        }
        if self.nodes.is_empty() {
            return Self::default();
        }
        Self {
            width: self.width,
            ..rebuild(self, 0, v)
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.nodes.iter().filter_map(|n| n.vertex).collect()
    }

    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self {
            nodes: self
                .nodes
                .iter()
                .map(|n| RdNode {
                    children: n.children.clone(),
                    vertex: n.vertex.map(&f),
                })
                .collect(),
            width: self.width,
        }
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.nodes.len()];
        for (t, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                p[c] = Some(t);
            }
        }
        p
    }

    /// Nodes in an order where every child precedes its parent.
    /// Assumes a well-formed tree.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        if self.nodes.is_empty() {
            return order;
        }
        let mut stack = vec![0];
        while let Some(t) = stack.pop() {
            order.push(t);
            stack.extend(self.nodes[t].children.iter().rev().copied());
        }
        order.reverse();
        order
    }

    /// The set of leaf vertices below every node. Assumes a well-formed tree.
    pub fn below_sets(&self) -> Vec<VertexSet> {
        let mut below = vec![VertexSet::new(); self.nodes.len()];
        for t in self.postorder() {
            let mut s = VertexSet::new();
            if let Some(v) = self.nodes[t].vertex {
                s.insert(v);
            }
            for &c in &self.nodes[t].children {
                s.union_with(&below[c]);
            }
            below[t] = s;
        }
        below
    }

    /// Maximum cut-rank inside `domain` over the sets below non-root nodes.
    pub fn compute_width(&self, g: &Graph, domain: &VertexSet) -> usize {
        self.below_sets()
            .iter()
            .skip(1)
            .map(|s| g.cut_rank_within(s, domain))
            .max()
            .unwrap_or(0)
    }

    /// Returns `self` with its cached width recomputed for `g[domain]`.
    pub fn with_width(mut self, g: &Graph, domain: &VertexSet) -> Self {
        self.width = self.compute_width(g, domain);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RdViolation {
    Structure(String),
    LeafWithoutVertex { node: usize },
    InternalWithVertex { node: usize },
    Arity { node: usize, children: usize },
    VertexOutOfRange { vertex: usize },
    VertexRepeated { vertex: usize },
    VertexMissing { vertex: usize },
    WidthMismatch { cached: usize, actual: usize },
}

impl fmt::Display for RdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RdViolation::Structure(m) => write!(f, "tree structure: {m}"),
            RdViolation::LeafWithoutVertex { node } => write!(f, "leaf {node} carries no vertex"),
            RdViolation::InternalWithVertex { node } => {
                write!(f, "internal node {node} carries a vertex")
            }
            RdViolation::Arity { node, children } => {
                write!(f, "node {node} has {children} children, expected 2")
            }
            RdViolation::VertexOutOfRange { vertex } => write!(f, "unknown vertex {vertex}"),
            RdViolation::VertexRepeated { vertex } => {
                write!(f, "vertex {vertex} on several leaves")
            }
            RdViolation::VertexMissing { vertex } => write!(f, "vertex {vertex} on no leaf"),
            RdViolation::WidthMismatch { cached, actual } => {
                write!(f, "cached width {cached} but actual width {actual}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdReport {
    pub violations: Vec<RdViolation>,
    /// Recomputed width, available whenever the tree shape is sound.
    pub width: Option<usize>,
}

impl RdReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the leaves of `rd` biject onto V(g), that every internal node
/// has two children and that the cached width matches.
pub fn validate_rank_decomposition(g: &Graph, rd: &RankDecomposition) -> RdReport {
    let mut violations = Vec::new();
    let children: Vec<Vec<usize>> = rd.nodes.iter().map(|n| n.children.clone()).collect();
    if let Err(msg) = check_rooted_tree(&children) {
        violations.push(RdViolation::Structure(msg));
        return RdReport {
            violations,
            width: None,
        };
    }
    if rd.nodes.is_empty() && g.n() > 0 {
        violations.push(RdViolation::Structure(
            "no nodes for a nonempty graph".into(),
        ));
        return RdReport {
            violations,
            width: None,
        };
    }
    let mut seen = vec![false; g.n()];
    for (t, node) in rd.nodes.iter().enumerate() {
        match (node.children.len(), node.vertex) {
            (0, None) => violations.push(RdViolation::LeafWithoutVertex { node: t }),
            (0, Some(v)) if v >= g.n() => {
                violations.push(RdViolation::VertexOutOfRange { vertex: v })
            }
            (0, Some(v)) if seen[v] => violations.push(RdViolation::VertexRepeated { vertex: v }),
            (0, Some(v)) => seen[v] = true,
            (k, vertex) => {
                if k != 2 {
                    violations.push(RdViolation::Arity {
                        node: t,
                        children: k,
                    });
                }
                if vertex.is_some() {
                    violations.push(RdViolation::InternalWithVertex { node: t });
                }
            }
        }
    }
    for (v, s) in seen.iter().enumerate() {
        if !s {
            violations.push(RdViolation::VertexMissing { vertex: v });
        }
    }
    let width = if violations.is_empty() {
        let w = rd.compute_width(g, &g.vertex_set());
        if w != rd.width {
            violations.push(RdViolation::WidthMismatch {
                cached: rd.width,
                actual: w,
            });
        }
        Some(w)
    } else {
        None
    };
    RdReport { violations, width }
}
