//! Twin classes of the below-sets of a rank decomposition.
//!
//! At every node `t`, the vertices below `t` are grouped by their
//! neighbourhood outside the modulator and outside the below-set. Classes are
//! indexed by their minimum vertex; indices past the last nonempty class are
//! empty padding up to `z = 2^c`.

use std::collections::BTreeMap;

use crate::decomposition::{validate_rank_decomposition, RankDecomposition, RdViolation};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

static EMPTY: VertexSet = VertexSet::new();

/// Largest rank-decomposition width whose class sets fit in one word.
pub const MAX_CLASS_WIDTH: usize = 6;

#[derive(Clone, Debug)]
pub struct TwinContext {
    pub z: usize,
    pub modulator: VertexSet,
    pub rd: RankDecomposition,
    pub below: Vec<VertexSet>,
    parent: Vec<Option<usize>>,
    /// Nonempty classes only.
    classes: Vec<Vec<VertexSet>>,
}

/// Computes every below-set and its twin classes.
///
/// `rd` must decompose `V(g) \ x` with width at most `c`.
pub fn build_twin_context(
    g: &Graph,
    x: &VertexSet,
    rd: &RankDecomposition,
    c: usize,
) -> Result<TwinContext> {
    g.check_subset(x)?;
    let domain = g.vertex_set().difference(x);
    let sub = g.induced_subgraph(&domain)?;
    let local = rd.map_vertices(|v| sub.local(v).unwrap_or(usize::MAX));
    let report = validate_rank_decomposition(&sub.graph, &local);
    if let Some(v) = report
        .violations
        .iter()
        .find(|v| !matches!(v, RdViolation::WidthMismatch { .. }))
    {
        return Err(Error::input(format!("rank decomposition of G - X: {v:?}")));
    }
    let width = report.width.unwrap_or(0);
    if width > c {
        return Err(Error::input(format!(
            "rank decomposition width {width} exceeds {c}"
        )));
    }
    if width > MAX_CLASS_WIDTH {
        return Err(Error::ResourceLimit {
            what: "twin classes",
            size: width,
            limit: MAX_CLASS_WIDTH,
        });
    }
    let below = rd.below_sets();
    let classes = below
        .iter()
        .map(|s| {
            let outside = domain.difference(s);
            let mut groups: BTreeMap<VertexSet, VertexSet> = BTreeMap::new();
            for v in s {
                groups
                    .entry(g.neighbors(v).intersection(&outside))
                    .or_default()
                    .insert(v);
            }
            let mut out: Vec<VertexSet> = groups.into_values().collect();
            out.sort_by_key(|c| c.first());
            out
        })
        .collect();
    Ok(TwinContext {
        z: 1usize.checked_shl(c as u32).unwrap_or(usize::MAX),
        modulator: x.clone(),
        parent: rd.parents(),
        rd: rd.clone(),
        below,
        classes,
    })
}

impl TwinContext {
    /// `R^t_j`, empty for padding slots.
    pub fn class(&self, t: usize, j: usize) -> &VertexSet {
        self.classes[t].get(j).unwrap_or(&EMPTY)
    }

    /// Number of nonempty classes at `t`; they occupy slots `0..count`.
    pub fn class_count(&self, t: usize) -> usize {
        self.classes[t].len()
    }

    pub fn slot(&self, t: usize, v: usize) -> Option<usize> {
        self.classes[t].iter().position(|c| c.contains(v))
    }

    fn check_siblings(&self, t1: usize, t2: usize) -> Result<()> {
        match (self.parent.get(t1), self.parent.get(t2)) {
            (Some(Some(p1)), Some(Some(p2))) if p1 == p2 && t1 != t2 => Ok(()),
            _ => Err(Error::input(format!(
                "nodes {t1} and {t2} are not siblings"
            ))),
        }
    }

    /// Rows of the link matrix between two siblings as bit masks over the
    /// nonempty classes of `t2`.
    pub fn link_rows(&self, g: &Graph, t1: usize, t2: usize) -> Result<Vec<u64>> {
        self.check_siblings(t1, t2)?;
        Ok(self.classes[t1]
            .iter()
            .map(|a| {
                self.classes[t2]
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| g.is_complete_between(a, b).unwrap_or(false))
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect())
    }

    /// The `z × z` link matrix: `L[j1][j2]` iff `R^{t1}_{j1}` is complete to
    /// `R^{t2}_{j2}`. Entries with an empty class are false.
    pub fn link_matrix(&self, g: &Graph, t1: usize, t2: usize) -> Result<Vec<Vec<bool>>> {
        let rows = self.link_rows(g, t1, t2)?;
        let z = self.z;
        if z > 1 << MAX_CLASS_WIDTH {
            return Err(Error::ResourceLimit {
                what: "dense link matrix",
                size: z,
                limit: 1 << MAX_CLASS_WIDTH,
            });
        }
        Ok((0..z)
            .map(|j1| {
                (0..z)
                    .map(|j2| rows.get(j1).is_some_and(|r| r >> j2 & 1 == 1))
                    .collect()
            })
            .collect())
    }

    /// For each nonempty class of `child`, the class of `parent` containing it.
    pub fn lift_compact(&self, child: usize, parent: usize) -> Result<Vec<usize>> {
        if self.parent.get(child) != Some(&Some(parent)) {
            return Err(Error::input(format!("{child} is not a child of {parent}")));
        }
        self.classes[child]
            .iter()
            .map(|c| {
                let v = c.first().expect("empty class stored");
                let j = self
                    .slot(parent, v)
                    .ok_or_else(|| Error::internal("vertex missing from parent classes"))?;
                if !c.is_subset(&self.classes[parent][j]) {
                    return Err(Error::internal(format!(
                        "class {c:?} of node {child} splits at node {parent}"
                    )));
                }
                Ok(j)
            })
            .collect()
    }

    /// The lift map `U` on all `z` slots; empty child classes go to the sink `z`.
    pub fn lift_map(&self, child: usize, parent: usize) -> Result<Vec<usize>> {
        let compact = self.lift_compact(child, parent)?;
        if self.z > 1 << MAX_CLASS_WIDTH {
            return Err(Error::ResourceLimit {
                what: "dense lift map",
                size: self.z,
                limit: 1 << MAX_CLASS_WIDTH,
            });
        }
        Ok((0..self.z)
            .map(|j| compact.get(j).copied().unwrap_or(self.z))
            .collect())
    }
}

/// Image of a slot set under a compact lift map.
pub(crate) fn lift_mask(mask: u64, lift: &[usize]) -> u64 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        m &= m - 1;
        out |= 1 << lift[j];
    }
    out
}

/// True when some slot of `a` is linked to some slot of `b`.
pub(crate) fn linked(a: u64, b: u64, rows: &[u64]) -> bool {
    let mut m = a;
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        m &= m - 1;
        if rows[j] & b != 0 {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::RdNode;
    use crate::testutil::{complete_bipartite, cycle, random_graph, set};

    fn c5_ctx() -> (Graph, TwinContext) {
        // {a,b,c} against {d,e} with a..e = 0..4; node 2 has children {d}=7, {e}=8.
        let g = cycle(5);
        let rd = RankDecomposition {
            nodes: vec![
                RdNode::internal(1, 2),
                RdNode::internal(3, 4),
                RdNode::internal(7, 8),
                RdNode::internal(5, 6),
                RdNode::leaf(2),
                RdNode::leaf(0),
                RdNode::leaf(1),
                RdNode::leaf(3),
                RdNode::leaf(4),
            ],
            width: 2,
        };
        let ctx = build_twin_context(&g, &VertexSet::new(), &rd, 2).unwrap();
        (g, ctx)
    }

    #[test]
    fn c5_classes() {
        let (g, ctx) = c5_ctx();
        assert_eq!(ctx.z, 4);
        assert_eq!(ctx.below[2], set(&[3, 4]));
        assert_eq!(ctx.class(2, 0), &set(&[3]));
        assert_eq!(ctx.class(2, 1), &set(&[4]));
        assert!(ctx.class(2, 2).is_empty());
        assert_eq!(ctx.class_count(0), 1);
        assert_eq!(ctx.class(0, 0), &g.vertex_set());

        let l = ctx.link_matrix(&g, 7, 8).unwrap();
        let ones: Vec<(usize, usize)> = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .filter(|&(a, b)| l[a][b])
            .collect();
        assert_eq!(ones, vec![(0, 0)]);

        // d and e see c and a respectively, so they stay apart at node 2.
        assert_eq!(ctx.lift_map(7, 2).unwrap(), vec![0, 4, 4, 4]);
        assert_eq!(ctx.lift_map(8, 2).unwrap(), vec![1, 4, 4, 4]);
        // At the root both sides merge into one class.
        assert_eq!(ctx.lift_map(2, 0).unwrap(), vec![0, 0, 4, 4]);
        assert!(ctx.link_matrix(&g, 7, 2).is_err());
        assert!(ctx.lift_map(7, 0).is_err());
    }

    #[test]
    fn complete_bipartite_side_is_one_class() {
        let g = complete_bipartite(3, 3);
        let left = RankDecomposition::caterpillar(&[0, 1, 2]);
        let right = RankDecomposition::caterpillar(&[3, 4, 5]);
        let rd = RankDecomposition::join(&left, &right).with_width(&g, &g.vertex_set());
        let ctx = build_twin_context(&g, &VertexSet::new(), &rd, 1).unwrap();
        let side = (0..rd.len())
            .find(|&t| ctx.below[t] == set(&[0, 1, 2]))
            .unwrap();
        assert_eq!(ctx.class_count(side), 1);
        let (a, b) = (rd.nodes[0].children[0], rd.nodes[0].children[1]);
        let l = ctx.link_matrix(&g, a, b).unwrap();
        assert_eq!(l.iter().flatten().filter(|&&x| x).count(), 1);
        let edgeless = Graph::new(6);
        let rd0 = rd.clone().with_width(&edgeless, &edgeless.vertex_set());
        let ctx0 = build_twin_context(&edgeless, &VertexSet::new(), &rd0, 1).unwrap();
        assert!(ctx0
            .link_matrix(&edgeless, a, b)
            .unwrap()
            .iter()
            .flatten()
            .all(|&x| !x));
    }

    #[test]
    fn rejects_wide_decompositions() {
        let (g, ctx) = c5_ctx();
        assert!(build_twin_context(&g, &VertexSet::new(), &ctx.rd, 1).is_err());
        assert!(build_twin_context(&g, &set(&[0]), &ctx.rd, 2).is_err());
    }

    #[test]
    fn random_contexts_are_consistent() {
        for seed in 0..40 {
            let g = random_graph(9, 0.45, 300 + seed);
            let x = set(&[0, 5]);
            let order: Vec<usize> = (0..9).filter(|v| !x.contains(*v)).collect();
            let domain = g.vertex_set().difference(&x);
            let rd = RankDecomposition::caterpillar(&order).with_width(&g, &domain);
            let ctx = build_twin_context(&g, &x, &rd, rd.width).unwrap();
            for t in 0..rd.len() {
                let count = ctx.class_count(t);
                assert!(count <= 1 << g.cut_rank_within(&ctx.below[t], &domain));
                let mut union = VertexSet::new();
                for j in 0..ctx.z {
                    assert!(union.is_disjoint(ctx.class(t, j)));
                    union.union_with(ctx.class(t, j));
                }
                assert_eq!(union, ctx.below[t]);
                for &c in &rd.nodes[t].children {
                    let u = ctx.lift_map(c, t).unwrap();
                    for (j, &uj) in u.iter().enumerate().take(ctx.class_count(c)) {
                        assert!(ctx.class(c, j).is_subset(ctx.class(t, uj)));
                    }
                }
            }
        }
    }
}
