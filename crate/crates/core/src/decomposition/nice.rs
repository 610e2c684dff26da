use std::fmt;

use super::rank::{validate_rank_decomposition, RankDecomposition, RdViolation};
use super::tree::{
    bag_width, check_rooted_tree, validate_tree_decomposition, TdViolation, TreeDecomposition,
};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Join,
    Introduce(usize),
    Forget(usize),
    Leaf,
    /// A leaf standing for the component with the given index.
    Boundary(usize),
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Join => "join",
            NodeKind::Introduce(_) => "introduce",
            NodeKind::Forget(_) => "forget",
            NodeKind::Leaf => "leaf",
            NodeKind::Boundary(_) => "boundary",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted vertices of the original graph.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A connected component of `G[X]` and a rank decomposition of it whose
/// leaves carry original vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: VertexSet,
    pub rd: RankDecomposition,
}

/// A nice decomposition of the torso `G ∘ X` in which every component of
/// `G[X]` hangs below its own boundary leaf. Node 0 is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NiceHTreeDecomposition {
    pub modulator: VertexSet,
    pub nodes: Vec<NiceNode>,
    pub components: Vec<Component>,
    pub c: usize,
    pub width: usize,
}

impl NiceHTreeDecomposition {
    pub fn computed_width(&self) -> usize {
        bag_width(self.nodes.iter().map(|n| n.bag.len()))
    }

    pub fn tree_decomposition(&self) -> TreeDecomposition {
        TreeDecomposition {
            bags: self.nodes.iter().map(|n| n.bag.clone()).collect(),
            children: self.nodes.iter().map(|n| n.children.clone()).collect(),
        }
    }

    /// Children before parents. Assumes a well-formed tree.
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
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ModulatorOutOfRange {
        vertex: usize,
    },
    Structure(String),
    MalformedBag {
        node: usize,
    },
    VertexOutOfRange {
        node: usize,
        vertex: usize,
    },
    ModulatorInBag {
        node: usize,
        vertex: usize,
    },
    VertexMissing {
        vertex: usize,
    },
    EdgeUncovered {
        u: usize,
        v: usize,
    },
    VertexDisconnected {
        vertex: usize,
    },
    TooManyChildren {
        node: usize,
        children: usize,
    },
    KindArity {
        node: usize,
        kind: &'static str,
        children: usize,
    },
    JoinBagMismatch {
        node: usize,
    },
    IntroduceMismatch {
        node: usize,
        vertex: usize,
    },
    ForgetMismatch {
        node: usize,
        vertex: usize,
    },
    SimpleLeafBag {
        node: usize,
        size: usize,
    },
    UnknownComponent {
        node: usize,
        component: usize,
    },
    BoundaryBagMismatch {
        node: usize,
        component: usize,
    },
    BoundaryLeafMissing {
        component: usize,
    },
    BoundaryLeafDuplicate {
        component: usize,
    },
    ComponentMismatch,
    ComponentRankDecomposition {
        component: usize,
        violation: RdViolation,
    },
    RankWidthBudget {
        component: usize,
        width: usize,
        c: usize,
    },
    WidthMismatch {
        declared: usize,
        actual: usize,
    },
}

impl Violation {
    /// Stable machine-readable name of the violated condition.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::ModulatorOutOfRange { .. } => "modulator-out-of-range",
            Violation::Structure(_) => "structure",
            Violation::MalformedBag { .. } => "malformed-bag",
            Violation::VertexOutOfRange { .. } => "vertex-out-of-range",
            Violation::ModulatorInBag { .. } => "modulator-in-bag",
            Violation::VertexMissing { .. } => "vertex-missing",
            Violation::EdgeUncovered { .. } => "edge-uncovered",
            Violation::VertexDisconnected { .. } => "vertex-disconnected",
            Violation::TooManyChildren { .. } => "too-many-children",
            Violation::KindArity { .. } => "kind-arity",
            Violation::JoinBagMismatch { .. } => "join-bag-mismatch",
            Violation::IntroduceMismatch { .. } => "introduce-mismatch",
            Violation::ForgetMismatch { .. } => "forget-mismatch",
            Violation::SimpleLeafBag { .. } => "simple-leaf-bag",
            Violation::UnknownComponent { .. } => "unknown-component",
            Violation::BoundaryBagMismatch { .. } => "boundary-bag-mismatch",
            Violation::BoundaryLeafMissing { .. } => "boundary-leaf-missing",
            Violation::BoundaryLeafDuplicate { .. } => "boundary-leaf-duplicate",
            Violation::ComponentMismatch => "component-mismatch",
            Violation::ComponentRankDecomposition { .. } => "component-rank-decomposition",
            Violation::RankWidthBudget { .. } => "rank-width-budget",
            Violation::WidthMismatch { .. } => "width-mismatch",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.kind())?;
        match self {
            Violation::ModulatorOutOfRange { vertex } => {
                write!(f, "modulator vertex {vertex} unknown")
            }
            Violation::Structure(m) => write!(f, "{m}"),
            Violation::MalformedBag { node } => write!(f, "bag of node {node} not sorted/unique"),
            Violation::VertexOutOfRange { node, vertex } => {
                write!(f, "node {node} holds unknown vertex {vertex}")
            }
            Violation::ModulatorInBag { node, vertex } => {
                write!(f, "node {node} holds modulator vertex {vertex}")
            }
            Violation::VertexMissing { vertex } => write!(f, "torso vertex {vertex} in no bag"),
            Violation::EdgeUncovered { u, v } => write!(f, "torso edge {{{u},{v}}} uncovered"),
            Violation::VertexDisconnected { vertex } => {
                write!(f, "nodes holding {vertex} are disconnected")
            }
            Violation::TooManyChildren { node, children } => {
                write!(f, "node {node} has {children} children")
            }
            Violation::KindArity {
                node,
                kind,
                children,
            } => write!(f, "{kind} node {node} has {children} children"),
            Violation::JoinBagMismatch { node } => {
                write!(f, "join node {node} differs from a child bag")
            }
            Violation::IntroduceMismatch { node, vertex } => {
                write!(f, "node {node} does not introduce exactly {vertex}")
            }
            Violation::ForgetMismatch { node, vertex } => {
                write!(f, "node {node} does not forget exactly {vertex}")
            }
            Violation::SimpleLeafBag { node, size } => {
                write!(f, "simple leaf {node} has bag of size {size}")
            }
            Violation::UnknownComponent { node, component } => {
                write!(
                    f,
                    "boundary leaf {node} names unknown component {component}"
                )
            }
            Violation::BoundaryBagMismatch { node, component } => {
                write!(f, "boundary leaf {node} bag differs from N(C{component})")
            }
            Violation::BoundaryLeafMissing { component } => {
                write!(f, "component {component} has no boundary leaf")
            }
            Violation::BoundaryLeafDuplicate { component } => {
                write!(f, "component {component} has several boundary leaves")
            }
            Violation::ComponentMismatch => {
                write!(f, "components differ from those of the modulator")
            }
            Violation::ComponentRankDecomposition {
                component,
                violation,
            } => write!(f, "component {component}: {violation}"),
            Violation::RankWidthBudget {
                component,
                width,
                c,
            } => write!(f, "component {component} has rank-width {width} > {c}"),
            Violation::WidthMismatch { declared, actual } => {
                write!(f, "declared width {declared} but bags give {actual}")
            }
        }
    }
}

fn sorted_unique(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

/// `a` equals `b` plus the single extra vertex `v`.
fn is_extension(a: &[usize], b: &[usize], v: usize) -> bool {
    a.len() == b.len() + 1 && !b.contains(&v) && a.iter().filter(|&&w| w != v).eq(b.iter())
}

/// Checks every defining condition of a nice decomposition of `G ∘ X` with
/// boundary leaves. With `check_rw` the component rank decompositions are
/// validated against `G[C]` and checked against the budget `c`.
pub fn validate_nice_h_decomposition(
    g: &Graph,
    d: &NiceHTreeDecomposition,
    check_rw: bool,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = g.n();
    if let Some(v) = d.modulator.iter().find(|&v| v >= n) {
        out.push(Violation::ModulatorOutOfRange { vertex: v });
        return out;
    }
    let children: Vec<Vec<usize>> = d.nodes.iter().map(|t| t.children.clone()).collect();
    if let Err(msg) = check_rooted_tree(&children) {
        out.push(Violation::Structure(msg));
        return out;
    }

    for (t, node) in d.nodes.iter().enumerate() {
        if !sorted_unique(&node.bag) {
            out.push(Violation::MalformedBag { node: t });
        }
        for &v in &node.bag {
            if v >= n {
                out.push(Violation::VertexOutOfRange { node: t, vertex: v });
            } else if d.modulator.contains(v) {
                out.push(Violation::ModulatorInBag { node: t, vertex: v });
            }
        }
        let k = node.children.len();
        if k > 2 {
            out.push(Violation::TooManyChildren {
                node: t,
                children: k,
            });
        }
        let expected = match node.kind {
            NodeKind::Join => 2,
            NodeKind::Introduce(_) | NodeKind::Forget(_) => 1,
            NodeKind::Leaf | NodeKind::Boundary(_) => 0,
        };
        if k != expected {
            if k <= 2 {
                out.push(Violation::KindArity {
                    node: t,
                    kind: node.kind.name(),
                    children: k,
                });
            }
            continue;
        }
        let child_bag = |i: usize| &d.nodes[node.children[i]].bag;
        match node.kind {
            NodeKind::Join => {
                if *child_bag(0) != node.bag || *child_bag(1) != node.bag {
                    out.push(Violation::JoinBagMismatch { node: t });
                }
            }
            NodeKind::Introduce(v) => {
                if !is_extension(&node.bag, child_bag(0), v) {
                    out.push(Violation::IntroduceMismatch { node: t, vertex: v });
                }
            }
            NodeKind::Forget(v) => {
                if !is_extension(child_bag(0), &node.bag, v) {
                    out.push(Violation::ForgetMismatch { node: t, vertex: v });
                }
            }
            NodeKind::Leaf => {
                if node.bag.len() != 1 {
                    out.push(Violation::SimpleLeafBag {
                        node: t,
                        size: node.bag.len(),
                    });
                }
            }
            NodeKind::Boundary(_) => {}
        }
    }

    let expected = g.components_within(&d.modulator);
    let mut given: Vec<&VertexSet> = d.components.iter().map(|c| &c.vertices).collect();
    given.sort_by_key(|s| s.first());
    if given.len() != expected.len() || given.iter().zip(&expected).any(|(a, b)| *a != b) {
        out.push(Violation::ComponentMismatch);
    }

    let mut leaves = vec![0usize; d.components.len()];
    for (t, node) in d.nodes.iter().enumerate() {
        if let NodeKind::Boundary(ci) = node.kind {
            let Some(comp) = d.components.get(ci) else {
                out.push(Violation::UnknownComponent {
                    node: t,
                    component: ci,
                });
                continue;
            };
            leaves[ci] += 1;
            let boundary = if comp.vertices.bound() <= n {
                g.neighborhood(&comp.vertices).to_vec()
            } else {
                Vec::new()
            };
            if node.bag != boundary {
                out.push(Violation::BoundaryBagMismatch {
                    node: t,
                    component: ci,
                });
            }
        }
    }
    for (ci, &count) in leaves.iter().enumerate() {
        match count {
            0 => out.push(Violation::BoundaryLeafMissing { component: ci }),
            1 => {}
            _ => out.push(Violation::BoundaryLeafDuplicate { component: ci }),
        }
    }

    if let Ok(torso) = g.collapse(&d.modulator) {
        let local_td = TreeDecomposition {
            bags: d
                .nodes
                .iter()
                .map(|t| t.bag.iter().filter_map(|&v| torso.local(v)).collect())
                .collect(),
            children,
        };
        let back = |v: usize| torso.original.get(v).copied().unwrap_or(v);
        for tv in validate_tree_decomposition(&torso.graph, &local_td) {
            out.push(match tv {
                TdViolation::Structure(m) => Violation::Structure(m),
                // Already reported against the original bags.
                TdViolation::MalformedBag { .. } | TdViolation::VertexOutOfRange { .. } => continue,
                TdViolation::VertexMissing { vertex } => Violation::VertexMissing {
                    vertex: back(vertex),
                },
                TdViolation::EdgeUncovered { u, v } => Violation::EdgeUncovered {
                    u: back(u),
                    v: back(v),
                },
                TdViolation::VertexDisconnected { vertex } => Violation::VertexDisconnected {
                    vertex: back(vertex),
                },
            });
        }
    }

    let actual = d.computed_width();
    if d.width != actual {
        out.push(Violation::WidthMismatch {
            declared: d.width,
            actual,
        });
    }

    if check_rw {
        for (ci, comp) in d.components.iter().enumerate() {
            if comp.vertices.bound() > n {
                continue;
            }
            let Ok(sub) = g.induced_subgraph(&comp.vertices) else {
                continue;
            };
            let size = sub.graph.n();
            let local = comp.rd.map_vertices(|v| sub.local(v).unwrap_or(size + v));
            let report = validate_rank_decomposition(&sub.graph, &local);
            for violation in report.violations {
                let violation = match violation {
                    RdViolation::VertexOutOfRange { vertex } => RdViolation::VertexOutOfRange {
                        vertex: vertex - size,
                    },
                    RdViolation::VertexRepeated { vertex } => RdViolation::VertexRepeated {
                        vertex: sub.original[vertex],
                    },
                    RdViolation::VertexMissing { vertex } => RdViolation::VertexMissing {
                        vertex: sub.original[vertex],
                    },
                    other => other,
                };
                out.push(Violation::ComponentRankDecomposition {
                    component: ci,
                    violation,
                });
            }
            if let Some(w) = report.width {
                if w > d.c {
                    out.push(Violation::RankWidthBudget {
                        component: ci,
                        width: w,
                        c: d.c,
                    });
                }
            }
        }
    }
    out
}
