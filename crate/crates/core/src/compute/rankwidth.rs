use crate::bits;
use crate::decomposition::{RankDecomposition, RdNode};
use crate::error::{Error, Result};
use crate::gf2;
use crate::graph::Graph;

use super::Limits;

/// Cut-rank of every vertex subset, indexed by mask.
fn all_cut_ranks(adj: &[u64]) -> Vec<u8> {
    let n = adj.len();
    let all = bits::full(n);
    let mut rows = Vec::with_capacity(n);
    (0..1u64 << n)
        .map(|s| {
            rows.clear();
            rows.extend(bits::iter(s).map(|v| adj[v] & all & !s));
            gf2::rank_words(&mut rows) as u8
        })
        .collect()
}

fn check_limit(g: &Graph, limit: usize) -> Result<()> {
    // Tables are indexed by subset, so stay well inside addressable memory.
    let cap = limit.min(24);
    if g.n() > cap {
        return Err(Error::ResourceLimit {
            what: "exact rank-width",
            size: g.n(),
            limit: cap,
        });
    }
    Ok(())
}

/// Exact rank-width with a witnessing decomposition, under the default limits.
pub fn exact_rankwidth(g: &Graph) -> Result<(usize, RankDecomposition)> {
    exact_rankwidth_limited(g, Limits::default().rankwidth)
}

/// Exact rank-width for graphs of at most `limit` vertices.
///
/// `best(S)` is the least width of a subtree with leaf set `S`, counting the
/// edge above it; splits are enumerated with the lowest vertex of `S` kept on
/// the first side.
pub fn exact_rankwidth_limited(g: &Graph, limit: usize) -> Result<(usize, RankDecomposition)> {
    check_limit(g, limit)?;
    let n = g.n();
    if n == 0 {
        return Ok((0, RankDecomposition::default()));
    }
    let adj = bits::adjacency(g);
    let cr = all_cut_ranks(&adj);
    let size = 1usize << n;
    let mut best = vec![0u8; size];
    let mut split = vec![0u32; size];
    for s in 1..size as u64 {
        if s.count_ones() == 1 {
            best[s as usize] = cr[s as usize];
            continue;
        }
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut value = u8::MAX;
        let mut choice = 0;
        let mut sub = 0u64;
        loop {
            if sub != rest {
                let a = (low | sub) as usize;
                let b = (s as usize) ^ a;
                let v = cr[a].max(cr[b]).max(best[a]).max(best[b]);
                if v < value {
                    value = v;
                    choice = a as u32;
                    if v <= cr[s as usize] {
                        break;
                    }
                }
            }
            if sub == rest {
                break;
            }
            sub = (sub.wrapping_sub(rest)) & rest;
        }
        best[s as usize] = value.max(cr[s as usize]);
        split[s as usize] = choice;
    }
    let full = bits::full(n);
    let mut nodes = Vec::with_capacity(2 * n - 1);
    let mut stack = vec![(full, None::<usize>)];
    while let Some((s, parent)) = stack.pop() {
        let id = nodes.len();
        if let Some(p) = parent {
            let node: &mut RdNode = &mut nodes[p];
            node.children.push(id);
        }
        if s.count_ones() == 1 {
            nodes.push(RdNode::leaf(s.trailing_zeros() as usize));
        } else {
            nodes.push(RdNode {
                children: Vec::new(),
                vertex: None,
            });
            let a = split[s as usize] as u64;
            stack.push((s ^ a, Some(id)));
            stack.push((a, Some(id)));
        }
    }
    let rd = RankDecomposition { nodes, width: 0 }.with_width(g, &g.vertex_set());
    let width = best[full as usize] as usize;
    if rd.width != width {
        return Err(Error::internal(format!(
            "rank-width witness has width {} instead of {width}",
            rd.width
        )));
    }
    Ok((width, rd))
}

/// Whether `g` has rank-width at most `c`, without building a witness.
pub(crate) fn rankwidth_at_most(adj: &[u64], c: usize) -> bool {
    let n = adj.len();
    if c >= n / 2 {
        return true;
    }
    let cr = all_cut_ranks(adj);
    let c = c as u8;
    let size = 1usize << n;
    let mut ok = vec![false; size];
    for s in 1..size as u64 {
        if cr[s as usize] > c {
            continue;
        }
        if s.count_ones() == 1 {
            ok[s as usize] = true;
            continue;
        }
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut sub = 0u64;
        loop {
            if sub != rest {
                let a = (low | sub) as usize;
                let b = (s as usize) ^ a;
                if ok[a] && ok[b] {
                    ok[s as usize] = true;
                    break;
                }
            }
            if sub == rest {
                break;
            }
            sub = (sub.wrapping_sub(rest)) & rest;
        }
    }
    ok[bits::full(n) as usize]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_rank_decomposition;
    use crate::testutil::{complete, complete_bipartite, cycle, path, petersen, random_graph};

    fn check(g: &Graph) -> usize {
        let (w, rd) = exact_rankwidth(g).unwrap();
        let report = validate_rank_decomposition(g, &rd);
        assert!(report.is_ok(), "{:?}", report.violations);
        assert_eq!(report.width, Some(w));
        assert!(rankwidth_at_most(&bits::adjacency(g), w));
        if w > 0 {
            assert!(!rankwidth_at_most(&bits::adjacency(g), w - 1));
        }
        w
    }

    /// Minimum width over every rooted binary tree shape, by recursive
    /// enumeration of leaf-set splits.
    fn all_trees(g: &Graph) -> usize {
        fn best(g: &Graph, s: &[usize]) -> usize {
            let set = s.iter().copied().collect();
            let here = g.cut_rank(&set);
            if s.len() == 1 {
                return here;
            }
            let rest = &s[1..];
            let mut out = usize::MAX;
            for mask in 0..(1u32 << rest.len()) - 1 {
                let mut a = vec![s[0]];
                let mut b = Vec::new();
                for (i, &v) in rest.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        a.push(v);
                    } else {
                        b.push(v);
                    }
                }
                out = out.min(best(g, &a).max(best(g, &b)));
            }
            out.max(here)
        }
        if g.n() == 0 {
            return 0;
        }
        best(g, &g.vertices().collect::<Vec<_>>())
    }

    #[test]
    fn known_values() {
        for n in 2..7 {
            assert_eq!(check(&complete(n)), 1);
        }
        assert_eq!(check(&Graph::new(1)), 0);
        assert_eq!(check(&Graph::new(0)), 0);
        assert_eq!(check(&Graph::new(4)), 0);
        assert_eq!(check(&cycle(5)), 2);
        assert_eq!(all_trees(&cycle(5)), 2);
        assert_eq!(check(&path(7)), 1);
        assert_eq!(check(&complete_bipartite(3, 3)), 1);
        assert_eq!(check(&cycle(4)), 1);
    }

    #[test]
    fn petersen_rank_width() {
        assert_eq!(check(&petersen()), 3);
    }

    #[test]
    fn matches_tree_enumeration() {
        for seed in 0..30 {
            let g = random_graph(
                3 + seed as usize % 5,
                [0.3, 0.5, 0.7][seed as usize % 3],
                100 + seed,
            );
            assert_eq!(check(&g), all_trees(&g), "seed {seed}");
        }
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(
            exact_rankwidth_limited(&path(6), 5),
            Err(Error::ResourceLimit { limit: 5, .. })
        ));
    }
}
