use crate::decomposition::{
    validate_nice_h_decomposition, NiceHTreeDecomposition, NodeKind, RankDecomposition, RdNode,
};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug)]
enum Label {
    Plain,
    Vertex(usize),
    Boundary(usize),
}

#[derive(Clone, Debug)]
struct Node {
    label: Label,
    children: Vec<usize>,
}

/// Builds a rank decomposition of `g` from a nice decomposition of width
/// `k` whose components have rank-width at most `c`; the result has width
/// at most `c + k + 1`.
///
/// Every torso vertex gets its own leaf hung beside the topmost node whose
/// bag contains it. Branches leading to neither such a leaf nor a boundary
/// leaf are pruned, each boundary leaf is replaced by the component's rank
/// decomposition and unary nodes are contracted.
pub fn assemble_rank_decomposition(
    g: &Graph,
    d: &NiceHTreeDecomposition,
) -> Result<RankDecomposition> {
    if let Some(v) = validate_nice_h_decomposition(g, d, true).first() {
        return Err(Error::input(format!("invalid decomposition: {v}")));
    }
    if g.n() == 0 {
        return Ok(RankDecomposition::default());
    }
    let mut tree: Vec<Node> = d
        .nodes
        .iter()
        .map(|n| Node {
            label: match n.kind {
                NodeKind::Boundary(ci) => Label::Boundary(ci),
                _ => Label::Plain,
            },
            children: n.children.clone(),
        })
        .collect();

    // Topmost holder of each torso vertex: the root or the child of its forget node.
    let mut parent = vec![None; tree.len()];
    for (t, n) in d.nodes.iter().enumerate() {
        for &c in &n.children {
            parent[c] = Some(t);
        }
    }
    for (t, n) in d.nodes.iter().enumerate() {
        for &v in &n.bag {
            let top = match parent[t] {
                None => true,
                Some(p) => !d.nodes[p].bag.contains(&v),
            };
            if top {
                let moved = tree[t].clone();
                tree.push(moved);
                let old = tree.len() - 1;
                tree.push(Node {
                    label: Label::Vertex(v),
                    children: vec![],
                });
                let leaf = tree.len() - 1;
                tree[t] = Node {
                    label: Label::Plain,
                    children: vec![old, leaf],
                };
            }
        }
    }

    let mut nodes = Vec::new();
    let root = emit(&tree, 0, d, &mut nodes)
        .ok_or_else(|| Error::internal("assembled decomposition is empty"))?;
    let rd = reroot(nodes, root).with_width(g, &g.vertex_set());
    if rd.vertex_set() != g.vertex_set() {
        return Err(Error::internal("assembled decomposition misses vertices"));
    }
    Ok(rd)
}

/// Emits the pruned, contracted subtree of `t`; returns its id in `out`.
fn emit(
    tree: &[Node],
    t: usize,
    d: &NiceHTreeDecomposition,
    out: &mut Vec<RdNode>,
) -> Option<usize> {
    match tree[t].label {
        Label::Vertex(v) => {
            out.push(RdNode::leaf(v));
            return Some(out.len() - 1);
        }
        Label::Boundary(ci) => {
            let rd = &d.components[ci].rd;
            let base = out.len();
            // Component nodes are copied in their own order; the root is at `base`.
            out.extend(rd.nodes.iter().map(|n| RdNode {
                children: n.children.iter().map(|&c| c + base).collect(),
                vertex: n.vertex,
            }));
            return (!rd.nodes.is_empty()).then_some(base);
        }
        Label::Plain => {}
    }
    let kept: Vec<usize> = tree[t]
        .children
        .iter()
        .filter_map(|&c| emit(tree, c, d, out))
        .collect();
    match kept.len() {
        0 => None,
        1 => Some(kept[0]),
        _ => {
            let mut acc = kept[0];
            for &k in &kept[1..] {
                out.push(RdNode::internal(acc, k));
                acc = out.len() - 1;
            }
            Some(acc)
        }
    }
}

/// Renumbers the nodes reachable from `root` in preorder.
fn reroot(nodes: Vec<RdNode>, root: usize) -> RankDecomposition {
    let mut id = vec![usize::MAX; nodes.len()];
    let mut order = Vec::with_capacity(nodes.len());
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        id[t] = order.len();
        order.push(t);
        stack.extend(nodes[t].children.iter().rev());
    }
    RankDecomposition {
        nodes: order
            .iter()
            .map(|&t| RdNode {
                children: nodes[t].children.iter().map(|&c| id[c]).collect(),
                vertex: nodes[t].vertex,
            })
            .collect(),
        width: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compute::{find_rc_torso, nicify, torso_result_for, Limits};
    use crate::decomposition::validate_rank_decomposition;
    use crate::testutil::{cycle, random_graph, set};
    use crate::vertex_set::VertexSet;

    fn check(g: &Graph, d: &NiceHTreeDecomposition) -> usize {
        let rd = assemble_rank_decomposition(g, d).unwrap();
        let report = validate_rank_decomposition(g, &rd);
        assert!(report.is_ok(), "{:?}", report.violations);
        assert!(
            rd.width <= d.c + d.width + 1,
            "{} > {} + {} + 1",
            rd.width,
            d.c,
            d.width
        );
        rd.width
    }

    #[test]
    fn single_vertex() {
        let g = Graph::new(1);
        let r = torso_result_for(&g, 1, &VertexSet::new(), &Limits::default()).unwrap();
        let d = nicify(&g, &r).unwrap();
        let rd = assemble_rank_decomposition(&g, &d).unwrap();
        assert_eq!(rd, RankDecomposition::single(0));
    }

    #[test]
    fn c5_without_modulator() {
        let g = cycle(5);
        let r = torso_result_for(&g, 1, &VertexSet::new(), &Limits::default()).unwrap();
        let d = nicify(&g, &r).unwrap();
        assert_eq!(d.width, 2);
        assert!(check(&g, &d) <= 3);
        let r = torso_result_for(&g, 1, &set(&[1, 2, 3]), &Limits::default()).unwrap();
        check(&g, &nicify(&g, &r).unwrap());
    }

    #[test]
    fn random_instances_respect_bound() {
        for seed in 0..80 {
            let n = 2 + seed as usize % 11;
            let g = random_graph(n, [0.2, 0.4, 0.6, 0.8][seed as usize % 4], 9_100 + seed);
            for c in 1..=2 {
                let r = find_rc_torso(&g, c, None).unwrap().unwrap();
                check(&g, &nicify(&g, &r).unwrap());
            }
        }
    }

    #[test]
    fn rejects_invalid_decomposition() {
        let g = cycle(5);
        let r = torso_result_for(&g, 1, &VertexSet::new(), &Limits::default()).unwrap();
        let mut d = nicify(&g, &r).unwrap();
        d.width += 1;
        assert!(matches!(
            assemble_rank_decomposition(&g, &d),
            Err(Error::InputDomain(_))
        ));
    }
}
