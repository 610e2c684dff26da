use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::decomposition::RankDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::table::Table;
use crate::twins::{build_twin_context, lift_mask, linked, TwinContext};
use crate::vertex_set::VertexSet;

use super::{schedule, Step};

/// An optimal extension of a precoloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precoloring {
    /// Number of distinct colors, counting every color used on the modulator.
    pub colors: usize,
    /// A color per vertex. Modulator vertices keep their given color; new
    /// colors are numbered above the largest given one.
    pub coloring: Vec<usize>,
}

/// `b[i]`: slots holding modulator color `i`. `d`: for every slot set, how
/// many fresh colors occupy exactly those slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    b: Vec<u64>,
    d: Vec<(u64, u32)>,
}

impl Key {
    fn fresh(&self) -> usize {
        self.d.iter().map(|&(_, n)| n as usize).sum()
    }
}

#[derive(Clone, Debug)]
enum Back {
    Leaf(Option<usize>),
    Join {
        left: usize,
        right: usize,
        /// Fresh colors shared by both sides, by slot sets.
        tau: Vec<(u64, u64, u32)>,
    },
}

/// Least number of colors in a proper coloring of `g` that agrees with
/// `precolor` on `x`, together with such a coloring.
///
/// `rd` decomposes `V(g) \ x` with width at most `c`; `precolor` must assign
/// every vertex of `x` and be proper on `g[x]`.
pub fn precoloring_extension(
    g: &Graph,
    x: &VertexSet,
    precolor: &BTreeMap<usize, usize>,
    rd: &RankDecomposition,
    c: usize,
) -> Result<Precoloring> {
    g.check_subset(x)?;
    if precolor.keys().copied().collect::<VertexSet>() != *x {
        return Err(Error::input(
            "precoloring must assign exactly the modulator",
        ));
    }
    for (u, v) in g.edges() {
        if x.contains(u) && x.contains(v) && precolor[&u] == precolor[&v] {
            return Err(Error::input(format!(
                "precoloring is improper on edge {u}-{v}"
            )));
        }
    }
    let palette: Vec<usize> = precolor
        .values()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<usize, usize> = palette
        .iter()
        .enumerate()
        .map(|(i, &col)| (col, i))
        .collect();
    let p = palette.len();
    let first_fresh = palette.last().map_or(0, |&m| m + 1);

    let mut coloring = vec![0; g.n()];
    for (&v, &col) in precolor {
        coloring[v] = col;
    }
    if x.len() == g.n() {
        return Ok(Precoloring {
            colors: p,
            coloring,
        });
    }

    let ctx = build_twin_context(g, x, rd, c)?;
    let mut tables: Vec<Table<Key, Back>> = vec![Table::default(); rd.len()];
    for (t, step) in schedule(g, &ctx)? {
        let mut out = Table::default();
        match step {
            Step::Leaf(v) => {
                for i in 0..p {
                    if !g
                        .neighbors(v)
                        .iter()
                        .any(|u| x.contains(u) && index[&precolor[&u]] == i)
                    {
                        let mut b = vec![0; p];
                        b[i] = 1;
                        out.insert(Key { b, d: vec![] }, Back::Leaf(Some(i)));
                    }
                }
                out.insert(
                    Key {
                        b: vec![0; p],
                        d: vec![(1, 1)],
                    },
                    Back::Leaf(None),
                );
            }
            Step::Join(j) => {
                let (t1, t2) = (&tables[j.left], &tables[j.right]);
                for (i1, k1, _) in t1.iter() {
                    for (i2, k2, _) in t2.iter() {
                        if (0..p).any(|i| linked(k1.b[i], k2.b[i], &j.rows)) {
                            continue;
                        }
                        let b: Vec<u64> = (0..p)
                            .map(|i| {
                                lift_mask(k1.b[i], &j.lift_left) | lift_mask(k2.b[i], &j.lift_right)
                            })
                            .collect();
                        let mut emit = |tau: &[(usize, usize, u32)]| {
                            let mut d: BTreeMap<u64, u32> = BTreeMap::new();
                            let mut left: Vec<u32> = k1.d.iter().map(|&(_, n)| n).collect();
                            let mut right: Vec<u32> = k2.d.iter().map(|&(_, n)| n).collect();
                            for &(a, b, n) in tau {
                                left[a] -= n;
                                right[b] -= n;
                                let z = lift_mask(k1.d[a].0, &j.lift_left)
                                    | lift_mask(k2.d[b].0, &j.lift_right);
                                *d.entry(z).or_default() += n;
                            }
                            for (a, &n) in left.iter().enumerate().filter(|(_, &n)| n > 0) {
                                *d.entry(lift_mask(k1.d[a].0, &j.lift_left)).or_default() += n;
                            }
                            for (b, &n) in right.iter().enumerate().filter(|(_, &n)| n > 0) {
                                *d.entry(lift_mask(k2.d[b].0, &j.lift_right)).or_default() += n;
                            }
                            let key = Key {
                                b: b.clone(),
                                d: d.into_iter().collect(),
                            };
                            let back = Back::Join {
                                left: i1,
                                right: i2,
                                tau: tau
                                    .iter()
                                    .map(|&(a, b, n)| (k1.d[a].0, k2.d[b].0, n))
                                    .collect(),
                            };
                            out.insert(key, back);
                        };
                        let pairs: Vec<(usize, usize)> = (0..k1.d.len())
                            .flat_map(|a| (0..k2.d.len()).map(move |b| (a, b)))
                            .filter(|&(a, b)| !linked(k1.d[a].0, k2.d[b].0, &j.rows))
                            .collect();
                        let mut left: Vec<u32> = k1.d.iter().map(|&(_, n)| n).collect();
                        let mut right: Vec<u32> = k2.d.iter().map(|&(_, n)| n).collect();
                        sharings(&pairs, 0, &mut left, &mut right, &mut Vec::new(), &mut emit);
                    }
                }
            }
        }
        tables[t] = out;
    }

    let root = &tables[0];
    let (best, _, _) = root
        .iter()
        .min_by_key(|(_, k, _)| k.fresh())
        .ok_or_else(|| Error::internal("no coloring record at the root"))?;
    let fresh_count = root.key(best).fresh();
    let mut colors = Vec::new();
    for (z, n) in &root.key(best).d {
        for _ in 0..*n {
            colors.push((first_fresh + colors.len(), *z));
        }
    }
    assign(&ctx, &tables, 0, best, colors, &palette, &mut coloring)?;
    Ok(Precoloring {
        colors: p + fresh_count,
        coloring,
    })
}

/// Calls `emit` on every sharing of fresh colors between the two sides:
/// counts on compatible pairs bounded by the remaining counts on each side.
fn sharings(
    pairs: &[(usize, usize)],
    at: usize,
    left: &mut [u32],
    right: &mut [u32],
    chosen: &mut Vec<(usize, usize, u32)>,
    emit: &mut impl FnMut(&[(usize, usize, u32)]),
) {
    let Some(&(a, b)) = pairs.get(at) else {
        emit(chosen);
        return;
    };
    sharings(pairs, at + 1, left, right, chosen, emit);
    for n in 1..=left[a].min(right[b]) {
        left[a] -= n;
        right[b] -= n;
        chosen.push((a, b, n));
        sharings(pairs, at + 1, left, right, chosen, emit);
        chosen.pop();
        left[a] += n;
        right[b] += n;
    }
}

/// Writes concrete colors below node `t`. `fresh` lists the concrete fresh
/// colors present at `t` with their slot sets.
fn assign(
    ctx: &TwinContext,
    tables: &[Table<Key, Back>],
    t: usize,
    entry: usize,
    fresh: Vec<(usize, u64)>,
    palette: &[usize],
    coloring: &mut [usize],
) -> Result<()> {
    match tables[t].value(entry) {
        Back::Leaf(choice) => {
            let v = ctx.rd.nodes[t].vertex.expect("leaf without vertex");
            coloring[v] = match choice {
                Some(i) => palette[*i],
                None => {
                    fresh
                        .first()
                        .ok_or_else(|| Error::internal("leaf lost its color"))?
                        .0
                }
            };
            Ok(())
        }
        Back::Join { left, right, tau } => {
            let (l, r) = (ctx.rd.nodes[t].children[0], ctx.rd.nodes[t].children[1]);
            let (kl, kr) = (tables[l].key(*left), tables[r].key(*right));
            let lift_l = ctx.lift_compact(l, t)?;
            let lift_r = ctx.lift_compact(r, t)?;
            let mut pool: HashMap<u64, Vec<usize>> = HashMap::new();
            for &(col, z) in &fresh {
                pool.entry(z).or_default().push(col);
            }
            let mut take = |z: u64| {
                pool.get_mut(&z)
                    .and_then(Vec::pop)
                    .ok_or_else(|| Error::internal("fresh colors do not reconcile"))
            };
            let mut used_l: HashMap<u64, u32> = HashMap::new();
            let mut used_r: HashMap<u64, u32> = HashMap::new();
            let (mut fl, mut fr) = (Vec::new(), Vec::new());
            for &(z1, z2, n) in tau {
                for _ in 0..n {
                    let col = take(lift_mask(z1, &lift_l) | lift_mask(z2, &lift_r))?;
                    fl.push((col, z1));
                    fr.push((col, z2));
                }
                *used_l.entry(z1).or_default() += n;
                *used_r.entry(z2).or_default() += n;
            }
            for &(z, n) in &kl.d {
                for _ in used_l.get(&z).copied().unwrap_or(0)..n {
                    fl.push((take(lift_mask(z, &lift_l))?, z));
                }
            }
            for &(z, n) in &kr.d {
                for _ in used_r.get(&z).copied().unwrap_or(0)..n {
                    fr.push((take(lift_mask(z, &lift_r))?, z));
                }
            }
            assign(ctx, tables, l, *left, fl, palette, coloring)?;
            assign(ctx, tables, r, *right, fr, palette, coloring)
        }
    }
}
