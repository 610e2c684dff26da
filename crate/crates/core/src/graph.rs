//! Simple undirected graphs on dense vertex indices `0..n`.

use crate::error::{Error, Result};
use crate::gf2;
use crate::vertex_set::VertexSet;

/// A simple undirected graph with bit-row adjacency.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    rows: Vec<VertexSet>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Self {
            rows: vec![VertexSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Repeated edges are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds the edge `uv`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::input(format!(
                "edge {{{u},{v}}} out of range for {n} vertices"
            )));
        }
        if u == v {
            return Err(Error::input(format!("self-loop at vertex {u}")));
        }
        if self.rows[u].insert(v) {
            self.rows[v].insert(u);
            self.m += 1;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u < self.n() && v < self.n() && self.rows[u].remove(v) {
            self.rows[v].remove(u);
            self.m -= 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.rows[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub(crate) fn check_subset(&self, s: &VertexSet) -> Result<()> {
        if s.bound() > self.n() {
            return Err(Error::input(format!(
                "vertex {} out of range for {} vertices",
                s.bound() - 1,
                self.n()
            )));
        }
        Ok(())
    }

    /// `N(S) \ S`.
    pub fn neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for v in s {
            out.union_with(&self.rows[v]);
        }
        out.difference(s)
    }

    /// `G[S]`, relabeled onto `0..|S|` in increasing vertex order.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Relabeled> {
        self.check_subset(s)?;
        let original = s.to_vec();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in original.iter().enumerate() {
            local[v] = i;
        }
        let mut graph = Graph::new(original.len());
        for (i, &v) in original.iter().enumerate() {
            for w in self.rows[v].intersection(s).iter() {
                if w > v {
                    graph.add_edge(i, local[w])?;
                }
            }
        }
        Ok(Relabeled { graph, original })
    }

    /// Connected components ordered by their minimum vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertex_set())
    }

    /// Connected components of `G[S]`, as subsets of `V(G)`, ordered by minimum vertex.
    pub fn components_within(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for start in s {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::singleton(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for w in self.rows[v].intersection(s).iter() {
                    if comp.insert(w) {
                        stack.push(w);
                    }
                }
            }
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }

    /// The torso `G ∘ X`: the graph on `V \ X` in which `u, v` are adjacent
    /// iff they are adjacent in `G` or joined by a path whose interior lies
    /// in `X`. Relabeled onto `0..|V \ X|`.
    pub fn collapse(&self, x: &VertexSet) -> Result<Relabeled> {
        self.check_subset(x)?;
        let keep = self.vertex_set().difference(x);
        let mut torso = self.induced_subgraph(&keep)?;
        for comp in self.components_within(x) {
            let boundary: Vec<usize> = self
                .neighborhood(&comp)
                .iter()
                .map(|v| torso.local(v).expect("neighbourhood outside modulator"))
                .collect();
            for (i, &a) in boundary.iter().enumerate() {
                for &b in &boundary[i + 1..] {
                    torso.graph.add_edge(a, b)?;
                }
            }
        }
        Ok(torso)
    }

    /// Cut-rank `ρ(U)`: GF(2) rank of the adjacency submatrix between `U`
    /// and `V \ U`.
    pub fn cut_rank(&self, u: &VertexSet) -> usize {
        self.cut_rank_within(u, &self.vertex_set())
    }

    /// Cut-rank of `U` inside `G[domain]`, i.e. the rank of `A[U, domain \ U]`.
    pub fn cut_rank_within(&self, u: &VertexSet, domain: &VertexSet) -> usize {
        let outside = domain.difference(u);
        let rows = u
            .iter()
            .map(|v| self.rows[v].intersection(&outside).words().to_vec())
            .collect();
        gf2::rank(rows)
    }

    /// True iff every pair in `A × B` is an edge. `A`, `B` must be disjoint
    /// and nonempty.
    pub fn is_complete_between(&self, a: &VertexSet, b: &VertexSet) -> Result<bool> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::input("complete-between test needs nonempty sets"));
        }
        if !a.is_disjoint(b) {
            return Err(Error::input("complete-between test needs disjoint sets"));
        }
        self.check_subset(a)?;
        self.check_subset(b)?;
        Ok(a.iter().all(|v| b.is_subset(&self.rows[v])))
    }

    /// Number of edges with exactly one endpoint in `side`, counting only
    /// edges inside `domain`.
    pub fn crossing_edges(&self, side: &VertexSet, domain: &VertexSet) -> usize {
        let other = domain.difference(side);
        side.intersection(domain)
            .iter()
            .map(|v| self.rows[v].intersection_len(&other))
            .sum()
    }
}

/// A graph together with the original identity of each of its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeled {
    pub graph: Graph,
    /// `original[i]` is the vertex of the source graph that became `i`.
    /// Strictly increasing.
    pub original: Vec<usize>,
}

impl Relabeled {
    /// Local index of an original vertex.
    pub fn local(&self, v: usize) -> Option<usize> {
        self.original.binary_search(&v).ok()
    }

    pub fn to_local_set(&self, s: &VertexSet) -> Option<VertexSet> {
        s.iter()
            .map(|v| self.local(v))
            .collect::<Option<VertexSet>>()
    }

    pub fn to_original_set(&self, s: &VertexSet) -> VertexSet {
        s.iter().map(|v| self.original[v]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{complete, cycle};

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn induced_subgraph_examples() {
        // a..e = 0..4
        let c5 = cycle(5);
        let p = c5.induced_subgraph(&set(&[0, 1, 2])).unwrap();
        assert_eq!(p.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let same = c5.induced_subgraph(&c5.vertex_set()).unwrap();
        assert_eq!(same.graph, c5);
        assert_eq!(same.original, vec![0, 1, 2, 3, 4]);
        let k3 = complete(4).induced_subgraph(&set(&[0, 2, 3])).unwrap();
        assert_eq!(k3.graph, complete(3));
        assert_eq!(k3.original, vec![0, 2, 3]);
        assert!(c5.induced_subgraph(&set(&[7])).is_err());
    }

    #[test]
    fn components_examples() {
        assert_eq!(
            Graph::new(3).connected_components(),
            vec![set(&[0]), set(&[1]), set(&[2])]
        );
        assert_eq!(cycle(5).connected_components(), vec![set(&[0, 1, 2, 3, 4])]);
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let comps = g.connected_components();
        assert_eq!(
            comps.iter().map(VertexSet::len).collect::<Vec<_>>(),
            vec![3, 2]
        );
        assert!(Graph::new(0).connected_components().is_empty());
    }

    /// Path-through-X adjacency by explicit search inside G[X].
    fn torso_edge_by_search(g: &Graph, x: &VertexSet, u: usize, v: usize) -> bool {
        if g.has_edge(u, v) {
            return true;
        }
        let mut seen = VertexSet::new();
        let mut stack: Vec<usize> = g.neighbors(u).intersection(x).to_vec();
        while let Some(w) = stack.pop() {
            if !seen.insert(w) {
                continue;
            }
            if g.has_edge(w, v) {
                return true;
            }
            stack.extend(g.neighbors(w).intersection(x).iter());
        }
        false
    }

    #[test]
    fn collapse_examples() {
        let c5 = cycle(5);
        assert_eq!(c5.collapse(&VertexSet::new()).unwrap().graph, c5);

        // x = {a}: b-c-d-e plus edge b-e closes a 4-cycle.
        let t = c5.collapse(&set(&[0])).unwrap();
        assert_eq!(t.original, vec![1, 2, 3, 4]);
        assert_eq!(t.graph, cycle(4));

        // x = {a,b}: triangle c-d-e.
        let t = c5.collapse(&set(&[0, 1])).unwrap();
        assert_eq!(t.graph, complete(3));

        let x = set(&[0, 1]);
        let t = c5.collapse(&x).unwrap();
        for (i, &u) in t.original.iter().enumerate() {
            for (j, &v) in t.original.iter().enumerate() {
                if i != j {
                    assert_eq!(t.graph.has_edge(i, j), torso_edge_by_search(&c5, &x, u, v));
                }
            }
        }
    }

    #[test]
    fn cut_rank_examples() {
        let c5 = cycle(5);
        // d,e = 3,4
        assert_eq!(c5.cut_rank(&set(&[3, 4])), 2);
        assert_eq!(c5.cut_rank(&VertexSet::new()), 0);
        assert_eq!(c5.cut_rank(&c5.vertex_set()), 0);
        let k33 = Graph::from_edges(6, (0..3).flat_map(|i| (3..6).map(move |j| (i, j)))).unwrap();
        assert_eq!(k33.cut_rank(&set(&[0, 1, 2])), 1);
        assert_eq!(Graph::new(0).cut_rank(&VertexSet::new()), 0);
    }

    #[test]
    fn complete_between_examples() {
        let k4 = complete(4);
        assert!(k4
            .is_complete_between(&set(&[0]), &set(&[1, 2, 3]))
            .unwrap());
        assert!(k4
            .is_complete_between(&set(&[0, 1]), &set(&[2, 3]))
            .unwrap());
        assert!(!Graph::new(4)
            .is_complete_between(&set(&[0]), &set(&[1]))
            .unwrap());
        assert!(!cycle(5)
            .is_complete_between(&set(&[0]), &set(&[1, 2]))
            .unwrap());
        assert!(k4
            .is_complete_between(&set(&[0, 1]), &set(&[1, 2]))
            .is_err());
        assert!(k4.is_complete_between(&set(&[]), &set(&[1, 2])).is_err());
    }
}
