use crate::decomposition::{
    validate_tree_decomposition, NiceHTreeDecomposition, NiceNode, NodeKind, TreeDecomposition,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::TorsoResult;

/// Arena of nice nodes built bottom-up; ids are renumbered at the end.
#[derive(Default)]
struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    /// Introduce chain from a singleton leaf up to `bag`.
    fn leaf_chain(&mut self, bag: &[usize]) -> usize {
        let mut top = self.push(NodeKind::Leaf, vec![bag[0]], vec![]);
        for i in 1..bag.len() {
            top = self.push(NodeKind::Introduce(bag[i]), bag[..=i].to_vec(), vec![top]);
        }
        top
    }

    /// Forgets `from \ to`, then introduces `to \ from`, on top of `top`.
    fn transition(&mut self, mut top: usize, to: &[usize]) -> usize {
        let from = self.nodes[top].bag.clone();
        let mut bag = from.clone();
        for &v in from.iter().filter(|v| !to.contains(v)) {
            bag.retain(|&w| w != v);
            top = self.push(NodeKind::Forget(v), bag.clone(), vec![top]);
        }
        for &v in to.iter().filter(|v| !from.contains(v)) {
            bag.push(v);
            bag.sort_unstable();
            top = self.push(NodeKind::Introduce(v), bag.clone(), vec![top]);
        }
        top
    }

    fn join_all(&mut self, tops: Vec<usize>) -> Option<usize> {
        let mut it = tops.into_iter();
        let first = it.next()?;
        Some(it.fold(first, |acc, t| {
            let bag = self.nodes[acc].bag.clone();
            self.push(NodeKind::Join, bag, vec![acc, t])
        }))
    }

    /// Nice subtree for node `t` of `td` whose top bag equals `td.bags[t]`,
    /// or `None` when the subtree holds no vertex at all.
    fn build(&mut self, td: &TreeDecomposition, t: usize) -> Option<usize> {
        let bag = &td.bags[t];
        let mut tops = Vec::new();
        for &c in &td.children[t] {
            if let Some(sub) = self.build(td, c) {
                tops.push(self.transition(sub, bag));
            }
        }
        if tops.is_empty() && !bag.is_empty() {
            tops.push(self.leaf_chain(bag));
        }
        self.join_all(tops)
    }

    fn preorder(self, root: usize) -> Vec<NiceNode> {
        let mut id = vec![usize::MAX; self.nodes.len()];
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![root];
        while let Some(t) = stack.pop() {
            id[t] = order.len();
            order.push(t);
            stack.extend(self.nodes[t].children.iter().rev());
        }
        order
            .iter()
            .map(|&t| {
                let n = &self.nodes[t];
                NiceNode {
                    kind: n.kind,
                    bag: n.bag.clone(),
                    children: n.children.iter().map(|&c| id[c]).collect(),
                }
            })
            .collect()
    }
}

/// Converts the torso decomposition of `r` into a nice decomposition of
/// the same width with one boundary leaf per component.
///
/// Each component hangs below the first node in preorder among those with
/// the smallest bag containing `N(C)`; that node becomes a join whose new
/// branch introduces down to a boundary leaf with bag `N(C)`.
pub fn nicify(g: &Graph, r: &TorsoResult) -> Result<NiceHTreeDecomposition> {
    let torso = g.collapse(&r.modulator)?;
    let local_td = TreeDecomposition {
        bags: r
            .torso_td
            .bags
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&v| {
                        torso
                            .local(v)
                            .ok_or_else(|| Error::input(format!("bag vertex {v} not in torso")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?,
        children: r.torso_td.children.clone(),
    };
    if let Some(v) = validate_tree_decomposition(&torso.graph, &local_td).first() {
        return Err(Error::input(format!("torso decomposition invalid: {v}")));
    }
    let expected = g.components_within(&r.modulator);
    let mut given: Vec<_> = r.components.iter().map(|c| c.vertices.clone()).collect();
    given.sort_by_key(|s| s.first());
    if given != expected {
        return Err(Error::input("components do not match the modulator"));
    }

    let mut b = Builder::default();
    let mut root = if r.torso_td.is_empty() {
        None
    } else {
        b.build(&r.torso_td, 0).map(|top| b.transition(top, &[]))
    };

    for (ci, comp) in r.components.iter().enumerate() {
        let boundary = g.neighborhood(&comp.vertices).to_vec();
        let Some(rt) = root else {
            let leaf = b.push(NodeKind::Boundary(ci), boundary, vec![]);
            root = Some(leaf);
            continue;
        };
        // Preorder walk over the current tree.
        let mut host = None;
        let mut stack = vec![rt];
        while let Some(t) = stack.pop() {
            let bag = &b.nodes[t].bag;
            if boundary.iter().all(|v| bag.contains(v))
                && host.is_none_or(|h: usize| bag.len() < b.nodes[h].bag.len())
            {
                host = Some(t);
            }
            stack.extend(b.nodes[t].children.iter().rev());
        }
        let host = host.ok_or_else(|| Error::input(format!("no bag contains N(C{ci})")))?;
        let moved = b.nodes[host].clone();
        let old = b.push(moved.kind, moved.bag.clone(), moved.children);
        let mut branch = b.push(NodeKind::Boundary(ci), boundary.clone(), vec![]);
        branch = b.transition(branch, &moved.bag);
        b.nodes[host] = NiceNode {
            kind: NodeKind::Join,
            bag: moved.bag,
            children: vec![old, branch],
        };
    }

    let nodes = match root {
        Some(rt) => b.preorder(rt),
        None => Vec::new(),
    };
    let mut d = NiceHTreeDecomposition {
        modulator: r.modulator.clone(),
        nodes,
        components: r.components.clone(),
        c: r.c,
        width: 0,
    };
    d.width = d.computed_width();
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compute::{find_rc_torso, torso_result_for, Limits};
    use crate::decomposition::validate_nice_h_decomposition;
    use crate::testutil::{complete, cycle, path, random_graph, set};
    use crate::vertex_set::VertexSet;

    fn roundtrip(g: &Graph, r: &TorsoResult) -> NiceHTreeDecomposition {
        let d = nicify(g, r).unwrap();
        let v = validate_nice_h_decomposition(g, &d, true);
        assert!(v.is_empty(), "{v:?}\n{d:?}");
        assert_eq!(d.width, r.achieved_width);
        d
    }

    #[test]
    fn plain_edge() {
        let g = path(2);
        let r = torso_result_for(&g, 1, &VertexSet::new(), &Limits::default()).unwrap();
        let d = roundtrip(&g, &r);
        assert!(d.nodes.iter().all(|n| matches!(
            n.kind,
            NodeKind::Introduce(_) | NodeKind::Forget(_) | NodeKind::Leaf
        )));
    }

    #[test]
    fn c5_with_path_component() {
        let g = cycle(5);
        let r = torso_result_for(&g, 1, &set(&[1, 2, 3]), &Limits::default()).unwrap();
        let d = roundtrip(&g, &r);
        let boundary: Vec<_> = d
            .nodes
            .iter()
            .filter(|n| matches!(n.kind, NodeKind::Boundary(_)))
            .collect();
        assert_eq!(boundary.len(), 1);
        assert_eq!(boundary[0].bag, vec![0, 4]);
    }

    #[test]
    fn empty_torso() {
        let g = complete(4);
        let r = find_rc_torso(&g, 1, None).unwrap().unwrap();
        let d = roundtrip(&g, &r);
        assert_eq!(d.nodes.len(), 1);
        let two = Graph::from_edges(5, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let r = torso_result_for(&two, 1, &two.vertex_set(), &Limits::default()).unwrap();
        roundtrip(&two, &r);
        let r = torso_result_for(&Graph::new(0), 1, &VertexSet::new(), &Limits::default()).unwrap();
        assert!(roundtrip(&Graph::new(0), &r).nodes.is_empty());
    }

    #[test]
    fn isolated_component_next_to_torso() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3)]).unwrap();
        let r = torso_result_for(&g, 1, &set(&[2, 3]), &Limits::default()).unwrap();
        roundtrip(&g, &r);
        let r = torso_result_for(&g, 1, &set(&[4]), &Limits::default()).unwrap();
        roundtrip(&g, &r);
    }

    #[test]
    fn random_roundtrips() {
        for seed in 0..80 {
            let n = 3 + seed as usize % 10;
            let g = random_graph(n, [0.15, 0.3, 0.5, 0.8][seed as usize % 4], 500 + seed);
            for c in 1..=2 {
                let r = find_rc_torso(&g, c, None).unwrap().unwrap();
                roundtrip(&g, &r);
            }
            let x = crate::testutil::subset_of(n, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            if let Ok(r) = torso_result_for(&g, 3, &x, &Limits::default()) {
                roundtrip(&g, &r);
            }
        }
    }

    #[test]
    fn rejects_malformed_input() {
        let g = cycle(5);
        let mut r = torso_result_for(&g, 1, &set(&[1, 2, 3]), &Limits::default()).unwrap();
        for bag in r.torso_td.bags.iter_mut() {
            *bag = vec![0];
        }
        assert!(matches!(nicify(&g, &r), Err(Error::InputDomain(_))));
    }
}
