use std::collections::BTreeMap;

use crate::decomposition::{Component, NiceHTreeDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modulator::precoloring_extension;

use super::{offer, run, without, Back, Local, Records, Rules, Run};

/// A proper coloring with the least number of colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub colors: usize,
    /// Colors in `0..colors`, one per vertex.
    pub coloring: Vec<usize>,
}

/// Restricted growth string: class index per bag position, classes numbered
/// by first occurrence.
type Partition = Vec<u8>;

fn normalize(p: &mut Partition) {
    let mut map = [u8::MAX; 256];
    let mut next = 0;
    for c in p.iter_mut() {
        if map[*c as usize] == u8::MAX {
            map[*c as usize] = next;
            next += 1;
        }
        *c = map[*c as usize];
    }
}

fn classes(p: &Partition) -> usize {
    p.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
}

/// All partitions of `len` positions.
fn partitions(len: usize) -> Vec<Partition> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                let k = classes(&p) as u8;
                (0..=k).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

struct Chromatic<'a> {
    g: &'a Graph,
    c: usize,
}

impl Rules for Chromatic<'_> {
    type Key = Partition;
    type Value = usize;
    /// Boundary leaves: the extension's colors, given classes as `0..k`.
    type Note = Vec<(usize, usize)>;

    fn better(new: &usize, old: &usize) -> bool {
        new < old
    }

    fn leaf(&self, _v: usize, out: &mut Records<Self>) {
        offer::<Self>(out, vec![0], 1, Back::None, Vec::new());
    }

    fn introduce(&self, bag: &[usize], pos: usize, child: &Records<Self>, out: &mut Records<Self>) {
        let v = bag[pos];
        for (i, key, slot) in child.iter() {
            let k = classes(key);
            let mut blocked = vec![false; k];
            for (q, (_, w)) in without(bag, pos).enumerate() {
                if self.g.has_edge(v, w) {
                    blocked[key[q] as usize] = true;
                }
            }
            for class in 0..=k {
                if blocked.get(class) == Some(&true) {
                    continue;
                }
                let mut next = key.clone();
                next.insert(pos, class as u8);
                normalize(&mut next);
                let value = if class < k || slot.value > k {
                    slot.value
                } else {
                    slot.value + 1
                };
                offer::<Self>(out, next, value, Back::One(i), Vec::new());
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
        for (i, key, slot) in child.iter() {
            let mut next = key.clone();
            next.remove(pos);
            normalize(&mut next);
            offer::<Self>(out, next, slot.value, Back::One(i), Vec::new());
        }
    }

    fn join(
        &self,
        _bag: &[usize],
        left: &Records<Self>,
        right: &Records<Self>,
        out: &mut Records<Self>,
    ) {
        for (i, key, a) in left.iter() {
            if let Some(j) = right.find(key) {
                let value = a.value.max(right.value(j).value);
                offer::<Self>(out, key.clone(), value, Back::Two(i, j), Vec::new());
            }
        }
    }

    fn boundary(&self, bag: &[usize], comp: &Component, out: &mut Records<Self>) -> Result<()> {
        let local = Local::new(self.g, bag, comp)?;
        'keys: for key in partitions(bag.len()) {
            for (a, &u) in bag.iter().enumerate() {
                for (b, &w) in bag.iter().enumerate().skip(a + 1) {
                    if key[a] == key[b] && self.g.has_edge(u, w) {
                        continue 'keys;
                    }
                }
            }
            let precolor: BTreeMap<usize, usize> = bag
                .iter()
                .zip(&key)
                .map(|(&u, &class)| (local.sub.local(u).expect("bag vertex"), class as usize))
                .collect();
            let ext =
                precoloring_extension(&local.sub.graph, &local.x, &precolor, &local.rd, self.c)?;
            let note: Vec<(usize, usize)> = comp
                .vertices
                .iter()
                .map(|v| {
                    (
                        v,
                        ext.coloring[local.sub.local(v).expect("component vertex")],
                    )
                })
                .collect();
            offer::<Self>(out, key, ext.colors, Back::None, note);
        }
        Ok(())
    }
}

/// Chromatic number of `g` and an optimal coloring.
pub fn solve_chromatic(g: &Graph, d: &NiceHTreeDecomposition) -> Result<Coloring> {
    let rules = Chromatic { g, c: d.c };
    let Some(run) = run(g, d, &rules)? else {
        return Ok(Coloring {
            colors: 0,
            coloring: Vec::new(),
        });
    };
    let entry = run.tables[run.root]
        .find(&Vec::new())
        .ok_or_else(|| Error::internal("no coloring record at the root"))?;
    let colors = run.tables[run.root].value(entry).value;
    let mut coloring = vec![usize::MAX; g.n()];
    let mut stack = vec![(run.root, entry, Vec::new(), (0..colors).collect::<Vec<_>>())];
    while let Some((t, entry, class_colors, palette)) = stack.pop() {
        stack.extend(descend(
            &run,
            t,
            entry,
            &class_colors,
            &palette,
            &mut coloring,
        ));
    }
    let used = coloring
        .iter()
        .copied()
        .collect::<std::collections::BTreeSet<_>>();
    if coloring.contains(&usize::MAX)
        || used.len() > colors
        || g.edges().any(|(u, v)| coloring[u] == coloring[v])
    {
        return Err(Error::internal(
            "reconstructed coloring is not optimal and proper",
        ));
    }
    Ok(Coloring { colors, coloring })
}

type Task = (usize, usize, Vec<usize>, Vec<usize>);

/// Colors the bag of `t` from `class_colors` and hands each child its class
/// colors and palette.
fn descend(
    run: &Run<Chromatic>,
    t: usize,
    entry: usize,
    class_colors: &[usize],
    palette: &[usize],
    coloring: &mut [usize],
) -> Vec<Task> {
    let node = &run.plan[t];
    let key = run.tables[t].key(entry);
    for (q, &v) in node.bag.iter().enumerate() {
        coloring[v] = class_colors[key[q] as usize];
    }
    let children = run.children(t, entry);
    match node.kind {
        NodeKind::Leaf => Vec::new(),
        NodeKind::Boundary(_) => {
            let k = class_colors.len();
            let mut spare = palette.iter().filter(|c| !class_colors.contains(c));
            let mut fresh = BTreeMap::new();
            for &(v, col) in &run.tables[t].value(entry).note {
                coloring[v] = if col < k {
                    class_colors[col]
                } else {
                    *fresh
                        .entry(col)
                        .or_insert_with(|| *spare.next().expect("palette too small"))
                };
            }
            Vec::new()
        }
        NodeKind::Join => children
            .into_iter()
            .map(|(c, i)| (c, i, class_colors.to_vec(), palette.to_vec()))
            .collect(),
        NodeKind::Introduce(v) => {
            let (c, i) = children[0];
            let pos = node.bag.binary_search(&v).expect("introduced vertex");
            let child_key = run.tables[c].key(i);
            let alone = key.iter().filter(|&&k| k == key[pos]).count() == 1;
            let child_colors = child_class_colors(
                child_key,
                |q| key[if q < pos { q } else { q + 1 }],
                class_colors,
            );
            let child_value = run.tables[c].value(i).value;
            let mut child_palette = palette.to_vec();
            if alone && child_value <= classes(child_key) {
                child_palette.retain(|&col| col != coloring[v]);
            }
            vec![(c, i, child_colors, child_palette)]
        }
        NodeKind::Forget(v) => {
            let (c, i) = children[0];
            let child_bag = &run.plan[c].bag;
            let pos = child_bag.binary_search(&v).expect("forgotten vertex");
            let child_key = run.tables[c].key(i);
            let mut child_colors = vec![usize::MAX; classes(child_key)];
            for (q, &class) in child_key.iter().enumerate() {
                if q != pos {
                    child_colors[class as usize] =
                        class_colors[key[if q < pos { q } else { q - 1 }] as usize];
                }
            }
            let own = child_key[pos] as usize;
            if child_colors[own] == usize::MAX {
                child_colors[own] = *palette
                    .iter()
                    .find(|col| !child_colors.contains(col))
                    .expect("palette too small");
            }
            vec![(c, i, child_colors, palette.to_vec())]
        }
    }
}

/// Class colors of a child key whose position `q` corresponds to parent
/// class `parent_class(q)`.
fn child_class_colors(
    child_key: &Partition,
    parent_class: impl Fn(usize) -> u8,
    class_colors: &[usize],
) -> Vec<usize> {
    let mut out = vec![usize::MAX; classes(child_key)];
    for (q, &class) in child_key.iter().enumerate() {
        out[class as usize] = class_colors[parent_class(q) as usize];
    }
    out
}
