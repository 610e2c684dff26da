use crate::decomposition::{Component, NiceHTreeDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modulator::maxcut_extension;
use crate::vertex_set::VertexSet;

use super::{offer, run, without, Back, Local, Records, Rules};

/// A maximum cut and its first side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub value: usize,
    pub side: VertexSet,
}

struct MaxCut<'a> {
    g: &'a Graph,
    c: usize,
}

impl MaxCut<'_> {
    /// Edges of `g[bag]` crossing the side given by `mask`.
    fn crossing(&self, bag: &[usize], mask: u64) -> usize {
        let mut n = 0;
        for (a, &u) in bag.iter().enumerate() {
            for (b, &w) in bag.iter().enumerate().skip(a + 1) {
                if (mask >> a ^ mask >> b) & 1 == 1 && self.g.has_edge(u, w) {
                    n += 1;
                }
            }
        }
        n
    }
}

impl Rules for MaxCut<'_> {
    /// Bit `i` set: bag position `i` is on the first side.
    type Key = u64;
    type Value = usize;
    /// Boundary leaves: component vertices on the first side.
    type Note = VertexSet;

    fn better(new: &usize, old: &usize) -> bool {
        new > old
    }

    fn leaf(&self, _v: usize, out: &mut Records<Self>) {
        offer::<Self>(out, 0, 0, Back::None, VertexSet::new());
        offer::<Self>(out, 1, 0, Back::None, VertexSet::new());
    }

    fn introduce(&self, bag: &[usize], pos: usize, child: &Records<Self>, out: &mut Records<Self>) {
        let low = (1u64 << pos) - 1;
        for (i, &key, slot) in child.iter() {
            let spread = (key & low) | (key & !low) << 1;
            for side in [0, 1u64 << pos] {
                let mask = spread | side;
                let gain = without(bag, pos)
                    .filter(|&(q, w)| {
                        (mask >> q ^ mask >> pos) & 1 == 1 && self.g.has_edge(bag[pos], w)
                    })
                    .count();
                offer::<Self>(out, mask, slot.value + gain, Back::One(i), VertexSet::new());
            }
        }
    }

    fn forget(
        &self,
        _child_bag: &[usize],
        pos: usize,
        child: &Records<Self>,
        out: &mut Records<Self>,
    ) {
        let low = (1u64 << pos) - 1;
        for (i, &key, slot) in child.iter() {
            let mask = (key & low) | (key >> (pos + 1)) << pos;
            offer::<Self>(out, mask, slot.value, Back::One(i), VertexSet::new());
        }
    }

    fn join(
        &self,
        bag: &[usize],
        left: &Records<Self>,
        right: &Records<Self>,
        out: &mut Records<Self>,
    ) {
        for (i, &key, a) in left.iter() {
            if let Some(j) = right.find(&key) {
                let value = a.value + right.value(j).value - self.crossing(bag, key);
                offer::<Self>(out, key, value, Back::Two(i, j), VertexSet::new());
            }
        }
    }

    fn boundary(&self, bag: &[usize], comp: &Component, out: &mut Records<Self>) -> Result<()> {
        let local = Local::new(self.g, bag, comp)?;
        for mask in 0u64..1 << bag.len() {
            let s: VertexSet = bag
                .iter()
                .enumerate()
                .filter(|&(a, _)| mask >> a & 1 == 1)
                .map(|(_, &u)| local.sub.local(u).expect("bag vertex"))
                .collect();
            let ext = maxcut_extension(&local.sub.graph, &local.x, &s, &local.rd, self.c)?;
            let side = local
                .sub
                .to_original_set(&ext.side)
                .intersection(&comp.vertices);
            offer::<Self>(out, mask, ext.value, Back::None, side);
        }
        Ok(())
    }
}

/// Maximum cut of `g` and a side achieving it.
pub fn solve_maxcut(g: &Graph, d: &NiceHTreeDecomposition) -> Result<Cut> {
    let rules = MaxCut { g, c: d.c };
    let Some(run) = run(g, d, &rules)? else {
        return Ok(Cut {
            value: 0,
            side: VertexSet::new(),
        });
    };
    let entry = run.tables[run.root]
        .find(&0)
        .ok_or_else(|| Error::internal("no cut record at the root"))?;
    let value = run.tables[run.root].value(entry).value;
    let mut side = VertexSet::new();
    for (t, i) in run.trace(run.root, entry) {
        let key = *run.tables[t].key(i);
        side.extend(
            run.plan[t]
                .bag
                .iter()
                .enumerate()
                .filter(|&(a, _)| key >> a & 1 == 1)
                .map(|(_, &v)| v),
        );
        if let NodeKind::Boundary(_) = run.plan[t].kind {
            side.union_with(&run.tables[t].value(i).note);
        }
    }
    if g.crossing_edges(&side, &g.vertex_set()) != value {
        return Err(Error::internal("reconstructed cut has the wrong size"));
    }
    Ok(Cut { value, side })
}
