use crate::decomposition::RankDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::table::Table;
use crate::twins::{build_twin_context, TwinContext};
use crate::vertex_set::VertexSet;

use super::{schedule, Step};

/// A maximum cut among those that put exactly `s` of the modulator on the
/// first side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutExtension {
    pub value: usize,
    /// The first side; it meets the modulator in `s`.
    pub side: VertexSet,
}

#[derive(Clone, Debug)]
enum Back {
    Leaf,
    Join(usize, usize),
}

/// Maximum number of crossing edges over partitions `(V1, V2)` of `V(g)`
/// with `V1 ∩ x = s`, edges inside `x` included.
pub fn maxcut_extension(
    g: &Graph,
    x: &VertexSet,
    s: &VertexSet,
    rd: &RankDecomposition,
    c: usize,
) -> Result<CutExtension> {
    g.check_subset(x)?;
    if !s.is_subset(x) {
        return Err(Error::input("the fixed side is not inside the modulator"));
    }
    let inner = g.crossing_edges(s, x);
    if x.len() == g.n() {
        return Ok(CutExtension {
            value: inner,
            side: s.clone(),
        });
    }
    let rest = x.difference(s);
    let ctx = build_twin_context(g, x, rd, c)?;
    // Key: per class, how many of its vertices sit on the first side.
    let mut tables: Vec<Table<Vec<u32>, (usize, Back)>> = vec![Table::default(); rd.len()];
    let better = |new: &(usize, Back), old: &(usize, Back)| new.0 > old.0;
    for (t, step) in schedule(g, &ctx)? {
        let mut out = Table::default();
        match step {
            Step::Leaf(v) => {
                let nb = g.neighbors(v);
                out.insert(vec![0], (nb.intersection_len(s), Back::Leaf));
                out.insert(vec![1], (nb.intersection_len(&rest), Back::Leaf));
            }
            Step::Join(j) => {
                let size = |node: usize, k: usize| ctx.class(node, k).len() as u64;
                let width = ctx.class_count(t);
                for (i1, k1, (v1, _)) in tables[j.left].iter() {
                    for (i2, k2, (v2, _)) in tables[j.right].iter() {
                        let mut cross = 0u64;
                        for (a, &ca) in k1.iter().enumerate() {
                            let (ca, na) = (ca as u64, size(j.left, a));
                            for (b, &cb) in k2.iter().enumerate() {
                                if j.rows[a] >> b & 1 == 1 {
                                    let (cb, nb) = (cb as u64, size(j.right, b));
                                    cross += ca * (nb - cb) + (na - ca) * cb;
                                }
                            }
                        }
                        let mut key = vec![0u32; width];
                        for (a, &ca) in k1.iter().enumerate() {
                            key[j.lift_left[a]] += ca;
                        }
                        for (b, &cb) in k2.iter().enumerate() {
                            key[j.lift_right[b]] += cb;
                        }
                        out.offer(key, (v1 + v2 + cross as usize, Back::Join(i1, i2)), better);
                    }
                }
            }
        }
        tables[t] = out;
    }
    let (best, _, (value, _)) = tables[0]
        .iter()
        .max_by_key(|(i, _, (v, _))| (*v, std::cmp::Reverse(*i)))
        .ok_or_else(|| Error::internal("no cut record at the root"))?;
    let mut side = s.clone();
    collect(&ctx, &tables, 0, best, &mut side);
    Ok(CutExtension {
        value: value + inner,
        side,
    })
}

fn collect(
    ctx: &TwinContext,
    tables: &[Table<Vec<u32>, (usize, Back)>],
    t: usize,
    entry: usize,
    side: &mut VertexSet,
) {
    match tables[t].value(entry).1 {
        Back::Leaf => {
            if tables[t].key(entry)[0] == 1 {
                side.insert(ctx.rd.nodes[t].vertex.expect("leaf without vertex"));
            }
        }
        Back::Join(l, r) => {
            let children = &ctx.rd.nodes[t].children;
            collect(ctx, tables, children[0], l, side);
            collect(ctx, tables, children[1], r, side);
        }
    }
}
