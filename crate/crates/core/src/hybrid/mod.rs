//! Solvers running on a nice decomposition of the torso `G ∘ X`.
//!
//! Records are computed leaves-to-root. Introduce, forget and join nodes use
//! the usual bag transitions on real edges of `G`; a boundary leaf is
//! seeded by the matching modulator program on `G[N(C) ∪ C]`. Edges added by
//! the collapse are never consulted.

mod chromatic;
mod hamiltonian;
mod maxcut;

pub use chromatic::{solve_chromatic, Coloring};
pub use hamiltonian::solve_hamiltonian;
pub use maxcut::{solve_maxcut, Cut};

use std::hash::Hash;

use crate::decomposition::{
    validate_nice_h_decomposition, Component, NiceHTreeDecomposition, NodeKind, RankDecomposition,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, Relabeled};
use crate::table::Table;
use crate::vertex_set::VertexSet;

/// Largest bag the solvers accept.
pub const MAX_BAG: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Chromatic,
    Hamiltonian,
    MaxCut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Chromatic(usize),
    Hamiltonian(bool),
    MaxCut(usize),
}

/// Runs the solver for `problem` and returns its bare answer.
pub fn run_htd_dp(g: &Graph, d: &NiceHTreeDecomposition, problem: Problem) -> Result<Answer> {
    Ok(match problem {
        Problem::Chromatic => Answer::Chromatic(solve_chromatic(g, d)?.colors),
        Problem::Hamiltonian => Answer::Hamiltonian(solve_hamiltonian(g, d)?.is_some()),
        Problem::MaxCut => Answer::MaxCut(solve_maxcut(g, d)?.value),
    })
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Back {
    None,
    One(usize),
    Two(usize, usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Slot<V, N> {
    pub value: V,
    pub back: Back,
    pub note: N,
}

pub(crate) type Records<P> =
    Table<<P as Rules>::Key, Slot<<P as Rules>::Value, <P as Rules>::Note>>;

/// Problem-specific transitions. Bags are sorted and records are indexed by
/// bag position.
pub(crate) trait Rules {
    type Key: Clone + Eq + Hash;
    type Value: Clone;
    type Note: Clone;

    fn better(new: &Self::Value, old: &Self::Value) -> bool;
    fn leaf(&self, v: usize, out: &mut Records<Self>);
    /// `bag` contains the new vertex at `pos`.
    fn introduce(&self, bag: &[usize], pos: usize, child: &Records<Self>, out: &mut Records<Self>);
    /// `child_bag` contains the forgotten vertex at `pos`.
    fn forget(
        &self,
        child_bag: &[usize],
        pos: usize,
        child: &Records<Self>,
        out: &mut Records<Self>,
    );
    fn join(
        &self,
        bag: &[usize],
        left: &Records<Self>,
        right: &Records<Self>,
        out: &mut Records<Self>,
    );
    fn boundary(&self, bag: &[usize], comp: &Component, out: &mut Records<Self>) -> Result<()>;
}

pub(crate) fn offer<P: Rules + ?Sized>(
    out: &mut Records<P>,
    key: P::Key,
    value: P::Value,
    back: Back,
    note: P::Note,
) {
    out.offer(key, Slot { value, back, note }, |new, old| {
        P::better(&new.value, &old.value)
    });
}

pub(crate) struct PlanNode {
    pub kind: NodeKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// The filled tables. The plan extends the decomposition by forget nodes
/// above its root until the bag is empty.
pub(crate) struct Run<P: Rules> {
    pub plan: Vec<PlanNode>,
    pub root: usize,
    pub tables: Vec<Records<P>>,
}

impl<P: Rules> Run<P> {
    /// Follows `back` from record `entry` of node `t` to the child records.
    pub fn children(&self, t: usize, entry: usize) -> Vec<(usize, usize)> {
        let kids = &self.plan[t].children;
        match self.tables[t].value(entry).back {
            Back::None => Vec::new(),
            Back::One(i) => vec![(kids[0], i)],
            Back::Two(i, j) => vec![(kids[0], i), (kids[1], j)],
        }
    }

    /// Every visited `(node, record)` of the solution rooted at `(t, entry)`.
    pub fn trace(&self, t: usize, entry: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![(t, entry)];
        while let Some(cur) = stack.pop() {
            out.push(cur);
            stack.extend(self.children(cur.0, cur.1));
        }
        out
    }
}

/// Validates `d` and fills the record tables. `None` for the empty graph.
pub(crate) fn run<P: Rules>(
    g: &Graph,
    d: &NiceHTreeDecomposition,
    rules: &P,
) -> Result<Option<Run<P>>> {
    let violations = validate_nice_h_decomposition(g, d, true);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::input(format!(
            "invalid decomposition: {}",
            list.join("; ")
        )));
    }
    if d.nodes.is_empty() {
        return Ok(None);
    }
    if let Some(t) = d.nodes.iter().find(|t| t.bag.len() > MAX_BAG) {
        return Err(Error::ResourceLimit {
            what: "bag size",
            size: t.bag.len(),
            limit: MAX_BAG,
        });
    }
    let mut plan: Vec<PlanNode> = d
        .nodes
        .iter()
        .map(|t| PlanNode {
            kind: t.kind,
            bag: t.bag.clone(),
            children: t.children.clone(),
        })
        .collect();
    let mut root = 0;
    while let Some(&v) = plan[root].bag.first() {
        plan.push(PlanNode {
            kind: NodeKind::Forget(v),
            bag: plan[root].bag[1..].to_vec(),
            children: vec![root],
        });
        root = plan.len() - 1;
    }

    let mut order = Vec::with_capacity(plan.len());
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        order.push(t);
        stack.extend(plan[t].children.iter().copied());
    }
    let mut tables: Vec<Records<P>> = (0..plan.len()).map(|_| Table::default()).collect();
    for &t in order.iter().rev() {
        let node = &plan[t];
        let mut out = Table::default();
        let pos = |bag: &[usize], v: usize| {
            bag.binary_search(&v)
                .map_err(|_| Error::internal("vertex not in bag"))
        };
        match node.kind {
            NodeKind::Leaf => rules.leaf(node.bag[0], &mut out),
            NodeKind::Introduce(v) => {
                rules.introduce(
                    &node.bag,
                    pos(&node.bag, v)?,
                    &tables[node.children[0]],
                    &mut out,
                );
            }
            NodeKind::Forget(v) => {
                let child_bag = &plan[node.children[0]].bag;
                rules.forget(
                    child_bag,
                    pos(child_bag, v)?,
                    &tables[node.children[0]],
                    &mut out,
                );
            }
            NodeKind::Join => {
                rules.join(
                    &node.bag,
                    &tables[node.children[0]],
                    &tables[node.children[1]],
                    &mut out,
                );
            }
            NodeKind::Boundary(ci) => rules.boundary(&node.bag, &d.components[ci], &mut out)?,
        }
        tables[t] = out;
    }
    Ok(Some(Run { plan, root, tables }))
}

/// `G[B ∪ C]` with `B` as the modulator and the component's decomposition
/// in local ids.
pub(crate) struct Local {
    pub sub: Relabeled,
    pub x: VertexSet,
    pub rd: RankDecomposition,
}

impl Local {
    pub fn new(g: &Graph, bag: &[usize], comp: &Component) -> Result<Self> {
        let x: VertexSet = bag.iter().copied().collect();
        let sub = g.induced_subgraph(&x.union(&comp.vertices))?;
        let local = |v: usize| {
            sub.local(v)
                .ok_or_else(|| Error::internal("vertex outside the boundary graph"))
        };
        let x = bag
            .iter()
            .map(|&v| local(v))
            .collect::<Result<VertexSet>>()?;
        let rd = comp.rd.map_vertices(|v| sub.local(v).unwrap_or(usize::MAX));
        Ok(Self { sub, x, rd })
    }
}

/// `bag` with `v` at `pos`, given the bag without it.
pub(crate) fn without(bag: &[usize], pos: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    bag.iter()
        .copied()
        .enumerate()
        .filter(move |&(i, _)| i != pos)
}
