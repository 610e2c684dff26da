use std::collections::HashSet;

use crate::bits;
use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::Limits;

/// Vertices outside `s ∪ {v}` reachable from `v` by paths whose interior
/// lies in `s`: the neighbours of `v` at the moment it is eliminated after `s`.
fn eliminated_neighbours(adj: &[u64], s: u64, v: usize) -> u64 {
    let mut comp = 1u64 << v;
    let mut frontier = comp;
    let mut reach = 0u64;
    while frontier != 0 {
        let mut nb = 0;
        for w in bits::iter(frontier) {
            nb |= adj[w];
        }
        reach |= nb;
        frontier = nb & s & !comp;
        comp |= frontier;
    }
    reach & !s & !(1u64 << v)
}

/// Largest minimum degree met while repeatedly deleting a minimum-degree vertex.
pub(crate) fn degeneracy(adj: &[u64]) -> usize {
    let mut alive = bits::full(adj.len());
    let mut best = 0;
    while alive != 0 {
        let (v, d) = bits::iter(alive)
            .map(|v| (v, (adj[v] & alive).count_ones() as usize))
            .min_by_key(|&(_, d)| d)
            .unwrap();
        best = best.max(d);
        alive &= !(1u64 << v);
    }
    best
}

enum Seen {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl Seen {
    fn new(n: usize) -> Self {
        if n <= 24 {
            Seen::Dense(vec![0; (1usize << n).div_ceil(64)])
        } else {
            Seen::Sparse(HashSet::new())
        }
    }

    fn insert(&mut self, s: u64) -> bool {
        match self {
            Seen::Dense(v) => {
                let (w, b) = ((s / 64) as usize, s % 64);
                let fresh = v[w] >> b & 1 == 0;
                v[w] |= 1 << b;
                fresh
            }
            Seen::Sparse(h) => h.insert(s),
        }
    }
}

/// An elimination order of width at most `k`, if one exists.
pub(crate) fn order_within(adj: &[u64], k: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let all = bits::full(n);
    let mut seen = Seen::new(n);
    let mut order = Vec::with_capacity(n);
    fn dfs(
        adj: &[u64],
        all: u64,
        k: usize,
        s: u64,
        seen: &mut Seen,
        order: &mut Vec<usize>,
    ) -> bool {
        let left = all & !s;
        if left.count_ones() as usize <= k + 1 {
            order.extend(bits::iter(left));
            return true;
        }
        for v in bits::iter(left) {
            if eliminated_neighbours(adj, s, v).count_ones() as usize > k {
                continue;
            }
            let next = s | 1u64 << v;
            if seen.insert(next) {
                order.push(v);
                if dfs(adj, all, k, next, seen, order) {
                    return true;
                }
                order.pop();
            }
        }
        false
    }
    dfs(adj, all, k, 0, &mut seen, &mut order).then_some(order)
}

/// The elimination-tree decomposition of an order, renumbered in preorder.
pub(crate) fn decomposition_from_order(adj: &[u64], order: &[usize]) -> TreeDecomposition {
    let n = adj.len();
    if n == 0 {
        return TreeDecomposition::default();
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bag = vec![0u64; n];
    let mut parent = vec![None; n];
    let mut s = 0u64;
    for &v in order {
        let q = eliminated_neighbours(adj, s, v);
        bag[v] = q | 1 << v;
        parent[v] = bits::iter(q).min_by_key(|&w| pos[w]);
        s |= 1 << v;
    }
    let root = order[n - 1];
    let mut kids = vec![Vec::new(); n];
    for (v, up) in parent.iter().enumerate() {
        match *up {
            Some(p) => kids[p].push(v),
            None if v != root => kids[root].push(v),
            None => {}
        }
    }
    let mut td = TreeDecomposition::default();
    let mut stack = vec![(root, None::<usize>)];
    while let Some((v, up)) = stack.pop() {
        let id = td.bags.len();
        td.bags.push(bits::iter(bag[v]).collect());
        td.children.push(Vec::new());
        if let Some(p) = up {
            td.children[p].push(id);
        }
        for &c in kids[v].iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    td
}

fn check_limit(g: &Graph, limit: usize) -> Result<()> {
    if g.n() > limit.min(64) {
        return Err(Error::ResourceLimit {
            what: "exact treewidth",
            size: g.n(),
            limit: limit.min(64),
        });
    }
    Ok(())
}

/// Exact treewidth with a witnessing decomposition, under the default limits.
pub fn exact_treewidth(g: &Graph) -> Result<(usize, TreeDecomposition)> {
    exact_treewidth_limited(g, Limits::default().treewidth)
}

/// Exact treewidth for graphs of at most `limit` vertices.
///
/// Searches elimination orders over eliminated-vertex subsets for each
/// candidate width, starting from the degeneracy.
pub fn exact_treewidth_limited(g: &Graph, limit: usize) -> Result<(usize, TreeDecomposition)> {
    check_limit(g, limit)?;
    let adj = bits::adjacency(g);
    Ok(exact_from_masks(&adj, degeneracy(&adj)))
}

pub(crate) fn exact_from_masks(adj: &[u64], lower: usize) -> (usize, TreeDecomposition) {
    let n = adj.len();
    for k in lower..n.max(1) {
        if let Some(order) = order_within(adj, k) {
            return (k, decomposition_from_order(adj, &order));
        }
    }
    let order: Vec<usize> = (0..n).collect();
    (n.saturating_sub(1), decomposition_from_order(adj, &order))
}

/// A decomposition of width at most `k`, if one exists.
pub fn treewidth_at_most(g: &Graph, k: usize, limit: usize) -> Result<Option<TreeDecomposition>> {
    check_limit(g, limit)?;
    let adj = bits::adjacency(g);
    Ok(order_within(&adj, k).map(|o| decomposition_from_order(&adj, &o)))
}
