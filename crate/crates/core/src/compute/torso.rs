use std::collections::HashMap;

use crate::bits;
use crate::decomposition::{Component, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Graph, Relabeled};
use crate::vertex_set::VertexSet;

use super::rankwidth::{exact_rankwidth_limited, rankwidth_at_most};
use super::treewidth::{degeneracy, exact_from_masks, order_within};
use super::Limits;

/// A modulator whose components all have rank-width at most `c`, together
/// with an optimal decomposition of its torso.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsoResult {
    pub c: usize,
    pub modulator: VertexSet,
    pub torso: Relabeled,
    /// Decomposition of the torso with bags in original vertex ids.
    pub torso_td: TreeDecomposition,
    pub components: Vec<Component>,
    pub achieved_width: usize,
}

/// Adjacency of `G ∘ X` on the original indices; rows of `X` are zero.
fn torso_masks(adj: &[u64], x: u64) -> Vec<u64> {
    let mut out: Vec<u64> = adj.iter().map(|&r| r & !x).collect();
    for &v in bits::iter(x).collect::<Vec<_>>().iter() {
        out[v] = 0;
    }
    for comp in bits::components(adj, x) {
        let mut nb = 0;
        for v in bits::iter(comp) {
            nb |= adj[v];
        }
        nb &= !x;
        for v in bits::iter(nb) {
            out[v] |= nb & !(1u64 << v);
        }
    }
    out
}

/// Next `k`-subset of `0..n` in lexicographic order of sorted member lists.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Searches all modulators for one whose torso has least treewidth.
///
/// Candidates are scanned by decreasing size and then lexicographically, and
/// only strictly better torsos replace the incumbent, so ties go to larger
/// and then lexicographically smaller modulators. With `k_max`, the first
/// candidate of width at most `k_max` is returned and `None` means no
/// admissible modulator reaches it.
pub fn find_rc_torso(g: &Graph, c: usize, k_max: Option<usize>) -> Result<Option<TorsoResult>> {
    find_rc_torso_limited(g, c, k_max, &Limits::default())
}

pub fn find_rc_torso_limited(
    g: &Graph,
    c: usize,
    k_max: Option<usize>,
    limits: &Limits,
) -> Result<Option<TorsoResult>> {
    let n = g.n();
    let cap = limits.torso.min(24);
    if n > cap {
        return Err(Error::ResourceLimit {
            what: "modulator search",
            size: n,
            limit: cap,
        });
    }
    let adj = bits::adjacency(g);
    let mut admissible_memo: HashMap<u64, bool> = HashMap::new();
    let mut admissible = |x: u64| {
        bits::components(&adj, x).into_iter().all(|comp| {
            *admissible_memo.entry(comp).or_insert_with(|| {
                let (local, _) = bits::compact(&adj, comp);
                rankwidth_at_most(&local, c)
            })
        })
    };

    let mut best: Option<(u64, usize)> = None;
    'sizes: for size in (0..=n).rev() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let x = idx.iter().fold(0u64, |m, &v| m | 1 << v);
            let torso = torso_masks(&adj, x);
            let (local, _) = bits::compact(&torso, bits::full(n) & !x);
            let lower = degeneracy(&local);
            let ceiling = match (best, k_max) {
                (Some((_, w)), _) => Some(w.checked_sub(1)),
                (None, Some(k)) => Some(Some(k)),
                (None, None) => None,
            };
            let fits = match ceiling {
                None => true,
                Some(None) => false,
                Some(Some(k)) => lower <= k && order_within(&local, k).is_some(),
            };
            if fits && admissible(x) {
                let (w, _) = exact_from_masks(&local, lower);
                best = Some((x, w));
                if w == 0 || k_max.is_some() {
                    break 'sizes;
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    let Some((x, _)) = best else {
        return Ok(None);
    };
    build_result(g, c, &bits::to_set(x), limits).map(Some)
}

/// Assembles a [`TorsoResult`] for a fixed modulator, computing exact
/// decompositions of the torso and of every component.
pub fn torso_result_for(
    g: &Graph,
    c: usize,
    modulator: &VertexSet,
    limits: &Limits,
) -> Result<TorsoResult> {
    g.check_subset(modulator)?;
    build_result(g, c, modulator, limits)
}

fn build_result(g: &Graph, c: usize, x: &VertexSet, limits: &Limits) -> Result<TorsoResult> {
    let torso = g.collapse(x)?;
    let (achieved_width, td) =
        super::treewidth::exact_treewidth_limited(&torso.graph, limits.treewidth)?;
    let torso_td = td.map_vertices(|v| torso.original[v]);
    let mut components = Vec::new();
    for comp in g.components_within(x) {
        let sub = g.induced_subgraph(&comp)?;
        let (w, rd) = exact_rankwidth_limited(&sub.graph, limits.torso.max(limits.rankwidth))?;
        if w > c {
            return Err(Error::input(format!(
                "component {:?} has rank-width {w} > {c}",
                comp
            )));
        }
        components.push(Component {
            vertices: comp,
            rd: rd.map_vertices(|v| sub.original[v]),
        });
    }
    Ok(TorsoResult {
        c,
        modulator: x.clone(),
        torso,
        torso_td,
        components,
        achieved_width,
    })
}
