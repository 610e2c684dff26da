//! Single-word vertex masks for the exponential routines, which never run on
//! more than 64 vertices.

use crate::graph::Graph;
use crate::vertex_set::VertexSet;

pub(crate) fn adjacency(g: &Graph) -> Vec<u64> {
    debug_assert!(g.n() <= 64);
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, w| m | 1 << w))
        .collect()
}

pub(crate) fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn iter(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub(crate) fn to_set(mask: u64) -> VertexSet {
    iter(mask).collect()
}

/// Connected components of the subgraph induced by `within`, ordered by
/// minimum vertex.
pub(crate) fn components(adj: &[u64], within: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut left = within;
    while left != 0 {
        let mut comp = left & left.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let mut nb = 0;
            for v in iter(frontier) {
                nb |= adj[v];
            }
            frontier = nb & within & !comp;
            comp |= frontier;
        }
        left &= !comp;
        out.push(comp);
    }
    out
}

/// Relabels the subgraph induced by `keep` onto `0..popcount(keep)`.
pub(crate) fn compact(adj: &[u64], keep: u64) -> (Vec<u64>, Vec<usize>) {
    let original: Vec<usize> = iter(keep).collect();
    let local = |m: u64| {
        original.iter().enumerate().fold(
            0u64,
            |acc, (i, &v)| if m >> v & 1 == 1 { acc | 1 << i } else { acc },
        )
    };
    let out = original.iter().map(|&v| local(adj[v] & keep)).collect();
    (out, original)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_and_compact() {
        // 0-1, 2-3-4, 5
        let adj = [0b10, 0b1, 0b1000, 0b10100, 0b1000, 0];
        assert_eq!(components(&adj, 0b111111), vec![0b11, 0b11100, 0b100000]);
        assert_eq!(components(&adj, 0b10101), vec![0b1, 0b100, 0b10000]);
        let (c, orig) = compact(&adj, 0b11100);
        assert_eq!(orig, vec![2, 3, 4]);
        assert_eq!(c, vec![0b10, 0b101, 0b10]);
        assert_eq!(iter(full(3)).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(full(64), u64::MAX);
    }
}
