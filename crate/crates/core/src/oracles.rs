//! Brute-force reference answers for small instances.
//!
//! Nothing here touches the decomposition or dynamic-programming code. The
//! graph is copied into plain adjacency masks first.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

pub const CHROMATIC_LIMIT: usize = 16;
pub const CHROMATIC_SETS_LIMIT: usize = 10;
pub const HAMILTONIAN_LIMIT: usize = 18;
pub const MAXCUT_LIMIT: usize = 22;
pub const MODULATOR_FREE_LIMIT: usize = 8;
pub const MODULATOR_LIMIT: usize = 4;

fn masks(g: &Graph, what: &'static str, limit: usize) -> Result<Vec<u32>> {
    if g.n() > limit {
        return Err(Error::ResourceLimit {
            what,
            size: g.n(),
            limit,
        });
    }
    let mut adj = vec![0u32; g.n()];
    for (u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    Ok(adj)
}

/// Chromatic number by iterative deepening over backtracking colorings,
/// visiting vertices by decreasing degree.
pub fn brute_chromatic(g: &Graph) -> Result<usize> {
    let adj = masks(g, "brute_chromatic", CHROMATIC_LIMIT)?;
    let n = adj.len();
    if n == 0 {
        return Ok(0);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].count_ones()), v));

    fn extend(
        adj: &[u32],
        order: &[usize],
        i: usize,
        k: usize,
        used: usize,
        color: &mut [usize],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        // Colors beyond the first unused one are symmetric.
        for col in 0..k.min(used + 1) {
            let clash = (0..adj.len()).any(|w| adj[v] >> w & 1 == 1 && color[w] == col);
            if !clash {
                color[v] = col;
                if extend(adj, order, i + 1, k, used.max(col + 1), color) {
                    return true;
                }
                color[v] = usize::MAX;
            }
        }
        false
    }

    (1..=n)
        .find(|&k| extend(&adj, &order, 0, k, 0, &mut vec![usize::MAX; n]))
        .ok_or_else(|| Error::internal("no coloring with n colors"))
}

/// Chromatic number by a dynamic program over vertex subsets: the least
/// vertex of a set is colored together with an independent subset.
pub fn chromatic_by_independent_sets(g: &Graph) -> Result<usize> {
    let adj = masks(g, "chromatic_by_independent_sets", CHROMATIC_SETS_LIMIT)?;
    let n = adj.len();
    let full = (1usize << n) - 1;
    let independent: Vec<bool> = (0..=full)
        .map(|s| (0..n).all(|v| s >> v & 1 == 0 || adj[v] as usize & s == 0))
        .collect();
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        // Enumerate subsets of `rest` and add the least vertex.
        let mut sub = rest;
        loop {
            let class = sub | low;
            if independent[class] && best[s ^ class] != usize::MAX {
                best[s] = best[s].min(best[s ^ class] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok(best[full])
}

/// Hamiltonicity by the Held–Karp subset dynamic program. Graphs with fewer
/// than three vertices have no Hamiltonian cycle.
pub fn brute_hamiltonian(g: &Graph) -> Result<bool> {
    let adj = masks(g, "brute_hamiltonian", HAMILTONIAN_LIMIT)?;
    let n = adj.len();
    if n < 3 {
        return Ok(false);
    }
    // ends[s]: vertices v such that a path from 0 through exactly s ends at v.
    let mut ends = vec![0u32; 1 << n];
    ends[1] = 1;
    for s in 1usize..1 << n {
        if s & 1 == 0 || ends[s] == 0 {
            continue;
        }
        for (v, &nbrs) in adj.iter().enumerate() {
            if ends[s] >> v & 1 == 0 {
                continue;
            }
            let mut next = nbrs & !(s as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[s | 1 << w] |= 1 << w;
            }
        }
    }
    Ok(ends[(1 << n) - 1] & adj[0] != 0)
}

/// Maximum cut by enumerating the sides of all vertices but vertex 0.
pub fn brute_maxcut(g: &Graph) -> Result<usize> {
    let adj = masks(g, "brute_maxcut", MAXCUT_LIMIT)?;
    let n = adj.len();
    if n == 0 {
        return Ok(0);
    }
    let mut best = 0;
    for side in 0u32..1 << (n - 1) {
        let side = side << 1;
        let cut: u32 = (0..n)
            .filter(|&v| side >> v & 1 == 1)
            .map(|v| (adj[v] & !side).count_ones())
            .sum();
        best = best.max(cut as usize);
    }
    Ok(best)
}

/// One instance of each modulator problem on the same graph and modulator.
#[derive(Clone, Debug, Default)]
pub struct ModulatorQuery {
    pub precolor: BTreeMap<usize, usize>,
    pub pairs: Vec<(usize, usize)>,
    pub side: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulatorAnswers {
    /// Least number of colors extending the precoloring, or `None` when the
    /// precoloring is improper.
    pub precoloring: Option<usize>,
    pub paths_cover: bool,
    pub cut: usize,
}

/// Answers all three modulator problems by exhaustive search.
pub fn brute_modulator_problems(
    g: &Graph,
    x: &VertexSet,
    q: &ModulatorQuery,
) -> Result<ModulatorAnswers> {
    let n = g.n();
    if x.iter().any(|v| v >= n) {
        return Err(Error::input("modulator vertex out of range"));
    }
    let free: Vec<usize> = (0..n).filter(|&v| !x.contains(v)).collect();
    if free.len() > MODULATOR_FREE_LIMIT {
        return Err(Error::ResourceLimit {
            what: "brute_modulator_problems",
            size: free.len(),
            limit: MODULATOR_FREE_LIMIT,
        });
    }
    if x.len() > MODULATOR_LIMIT {
        return Err(Error::ResourceLimit {
            what: "brute_modulator_problems",
            size: x.len(),
            limit: MODULATOR_LIMIT,
        });
    }
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| g.has_edge(u, v)).collect())
        .collect();
    Ok(ModulatorAnswers {
        precoloring: precoloring(&adj, &free, &q.precolor),
        paths_cover: paths_cover(&adj, x, &free, &q.pairs),
        cut: cut_extension(&adj, &free, &q.side),
    })
}

fn precoloring(
    adj: &[Vec<bool>],
    free: &[usize],
    precolor: &BTreeMap<usize, usize>,
) -> Option<usize> {
    let n = adj.len();
    let mut color = vec![usize::MAX; n];
    for (&v, &col) in precolor {
        color[v] = col;
    }
    for u in 0..n {
        for v in 0..n {
            if adj[u][v] && color[u] != usize::MAX && color[u] == color[v] {
                return None;
            }
        }
    }
    let given: BTreeSet<usize> = precolor.values().copied().collect();
    let base = given.iter().next_back().map_or(0, |&m| m + 1);

    struct Search<'a> {
        adj: &'a [Vec<bool>],
        free: &'a [usize],
        given: BTreeSet<usize>,
        base: usize,
        color: Vec<usize>,
        best: usize,
    }

    impl Search<'_> {
        fn run(&mut self, i: usize, opened: usize) {
            if self.given.len() + opened >= self.best {
                return;
            }
            if i == self.free.len() {
                self.best = self.given.len() + opened;
                return;
            }
            let v = self.free[i];
            let choices: Vec<usize> = self
                .given
                .iter()
                .copied()
                .chain(self.base..=self.base + opened)
                .collect();
            for col in choices {
                if (0..self.adj.len()).any(|w| self.adj[v][w] && self.color[w] == col) {
                    continue;
                }
                self.color[v] = col;
                let next = if col == self.base + opened {
                    opened + 1
                } else {
                    opened
                };
                self.run(i + 1, next);
                self.color[v] = usize::MAX;
            }
        }
    }

    let mut search = Search {
        adj,
        free,
        given,
        base,
        color,
        best: usize::MAX,
    };
    search.run(0, 0);
    Some(search.best)
}

fn paths_cover(adj: &[Vec<bool>], x: &VertexSet, free: &[usize], pairs: &[(usize, usize)]) -> bool {
    if pairs
        .iter()
        .any(|&(s, t)| s == t || !x.contains(s) || !x.contains(t))
    {
        return false;
    }
    let n = adj.len();

    struct Search<'a> {
        adj: &'a [Vec<bool>],
        pairs: &'a [(usize, usize)],
        used: Vec<bool>,
        direct: Vec<(usize, usize)>,
        remaining: usize,
    }

    impl Search<'_> {
        fn pair(&mut self, i: usize) -> bool {
            if i == self.pairs.len() {
                return self.remaining == 0;
            }
            let (s, t) = self.pairs[i];
            let e = (s.min(t), s.max(t));
            if self.adj[s][t] && !self.direct.contains(&e) {
                self.direct.push(e);
                if self.pair(i + 1) {
                    return true;
                }
                self.direct.pop();
            }
            self.walk(i, s)
        }

        /// Extends the path of pair `i` from `at` through unused free vertices.
        fn walk(&mut self, i: usize, at: usize) -> bool {
            let t = self.pairs[i].1;
            for w in 0..self.adj.len() {
                if !self.adj[at][w] || self.used[w] {
                    continue;
                }
                self.used[w] = true;
                self.remaining -= 1;
                if (self.adj[w][t] && self.pair(i + 1)) || self.walk(i, w) {
                    return true;
                }
                self.used[w] = false;
                self.remaining += 1;
            }
            false
        }
    }

    let mut used = vec![true; n];
    for &v in free {
        used[v] = false;
    }
    Search {
        adj,
        pairs,
        used,
        direct: Vec::new(),
        remaining: free.len(),
    }
    .pair(0)
}

fn cut_extension(adj: &[Vec<bool>], free: &[usize], side: &VertexSet) -> usize {
    let n = adj.len();
    let mut best = 0;
    for mask in 0u32..1 << free.len() {
        let mut on = vec![false; n];
        for v in side {
            if v < n {
                on[v] = true;
            }
        }
        for (i, &v) in free.iter().enumerate() {
            on[v] = mask >> i & 1 == 1;
        }
        let cut = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| adj[u][v] && on[u] != on[v])
            .count();
        best = best.max(cut);
    }
    best
}
