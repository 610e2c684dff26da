use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::decomposition::RankDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::table::Table;
use crate::twins::{build_twin_context, TwinContext};
use crate::vertex_set::VertexSet;

use super::{schedule, Join, Step};

/// A twin-class slot; while two children are combined, labels of the right
/// child are offset by [`RIGHT`].
type Label = u16;

const RIGHT: Label = 64;

/// Path pieces that touch a terminal, by pair index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Special {
    /// Leaves `s_i` and ends loose in a class.
    Start(u16, Label),
    /// Ends loose in a class and continues to `t_i`.
    End(u16, Label),
    /// A full path from `s_i` to `t_i`.
    Done(u16),
}

/// Loose pieces by their two end classes, plus the terminal pieces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct Key {
    normals: BTreeMap<(Label, Label), u32>,
    specials: BTreeSet<Special>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    Normal(Label, Label),
    Start(u16, Label),
    End(u16, Label),
}

/// Joins the `a_end` end of a piece of type `a` to the `b_end` end of a
/// distinct piece of type `b` through one edge. Terminal pieces come first.
#[derive(Clone, Copy, Debug)]
struct Merge {
    a: Item,
    a_end: Label,
    b: Item,
    b_end: Label,
}

#[derive(Clone, Debug)]
enum Back {
    Leaf,
    Join {
        left: usize,
        right: usize,
        merges: Vec<Merge>,
    },
}

fn pair(a: Label, b: Label) -> (Label, Label) {
    (a.min(b), a.max(b))
}

fn other((a, b): (Label, Label), end: Label) -> Label {
    if a == end {
        b
    } else {
        a
    }
}

/// Decides whether `g` has paths `P_i` from `s_i` to `t_i`, internally
/// disjoint and inside `V(g) \ x`, that together cover `V(g) \ x` exactly
/// once. Returns the paths as vertex sequences from `s_i` to `t_i`.
///
/// A path may be a single edge `s_i t_i`; an edge serves at most one pair.
pub fn disjoint_paths_cover(
    g: &Graph,
    x: &VertexSet,
    pairs: &[(usize, usize)],
    rd: &RankDecomposition,
    c: usize,
) -> Result<Option<Vec<Vec<usize>>>> {
    g.check_subset(x)?;
    for &(s, t) in pairs {
        if s == t {
            return Err(Error::input(format!("pair ({s}, {s}) has equal ends")));
        }
        if !x.contains(s) || !x.contains(t) {
            return Err(Error::input(format!(
                "pair ({s}, {t}) leaves the modulator"
            )));
        }
    }
    if pairs.len() > u16::MAX as usize {
        return Err(Error::input("too many pairs"));
    }

    let mut tables: Vec<Table<Key, Back>> = vec![Table::default(); rd.len()];
    let ctx = if x.len() == g.n() {
        None
    } else {
        let ctx = build_twin_context(g, x, rd, c)?;
        for (t, step) in schedule(g, &ctx)? {
            tables[t] = match step {
                Step::Leaf(v) => leaf(g, v, pairs),
                Step::Join(j) => join(&tables[j.left], &tables[j.right], &j),
            };
        }
        Some(ctx)
    };

    let root_keys: Vec<(usize, Key)> = match &ctx {
        Some(_) => tables[0].iter().map(|(i, k, _)| (i, k.clone())).collect(),
        None => vec![(0, Key::default())],
    };
    for (entry, key) in root_keys {
        if !accepts(g, pairs, &key) {
            continue;
        }
        let pieces = match &ctx {
            Some(ctx) => realize(ctx, &tables, 0, entry)?,
            None => Vec::new(),
        };
        let mut paths: Vec<Vec<usize>> = pairs.iter().map(|&(s, t)| vec![s, t]).collect();
        for piece in pieces {
            match piece.kind {
                Special::Done(i) => {
                    let (s, t) = pairs[i as usize];
                    paths[i as usize] = std::iter::once(s)
                        .chain(piece.verts)
                        .chain(std::iter::once(t))
                        .collect();
                }
                _ => return Err(Error::internal("accepted record has an open piece")),
            }
        }
        return Ok(Some(paths));
    }
    Ok(None)
}

fn leaf(g: &Graph, v: usize, pairs: &[(usize, usize)]) -> Table<Key, Back> {
    let mut out = Table::default();
    let mut lone = Key::default();
    lone.normals.insert((0, 0), 1);
    out.insert(lone, Back::Leaf);
    for (i, &(s, t)) in pairs.iter().enumerate() {
        let i = i as u16;
        let (to_s, to_t) = (g.has_edge(v, s), g.has_edge(v, t));
        let candidates = [
            (to_s, Special::Start(i, 0)),
            (to_t, Special::End(i, 0)),
            (to_s && to_t, Special::Done(i)),
        ];
        for (ok, sp) in candidates {
            if ok {
                let mut key = Key::default();
                key.specials.insert(sp);
                out.insert(key, Back::Leaf);
            }
        }
    }
    out
}

/// Whether a root record completes: nothing loose, and every pair without a
/// path through `V \ X` is an edge not already used by an identical pair.
fn accepts(g: &Graph, pairs: &[(usize, usize)], key: &Key) -> bool {
    if !key.normals.is_empty() || key.specials.iter().any(|s| !matches!(s, Special::Done(_))) {
        return false;
    }
    let mut direct = BTreeSet::new();
    pairs.iter().enumerate().all(|(i, &(s, t))| {
        key.specials.contains(&Special::Done(i as u16))
            || (g.has_edge(s, t) && direct.insert((s.min(t), s.max(t))))
    })
}

fn linked(rows: &[u64], a: Label, b: Label) -> bool {
    let (l, r) = match (a < RIGHT, b < RIGHT) {
        (true, false) => (a, b - RIGHT),
        (false, true) => (b, a - RIGHT),
        _ => return false,
    };
    rows[l as usize] >> r & 1 == 1
}

fn join(left: &Table<Key, Back>, right: &Table<Key, Back>, j: &Join) -> Table<Key, Back> {
    let mut out = Table::default();
    for (i1, k1, _) in left.iter() {
        for (i2, k2, _) in right.iter() {
            let Some(start) = disjoint_union(k1, k2) else {
                continue;
            };
            let (states, pred) = closure(start, &j.rows);
            for (at, state) in states.iter().enumerate() {
                let rename = |l: Label| {
                    if l < RIGHT {
                        j.lift_left[l as usize] as Label
                    } else {
                        j.lift_right[(l - RIGHT) as usize] as Label
                    }
                };
                let mut key = Key::default();
                for (&(a, b), &n) in &state.normals {
                    *key.normals.entry(pair(rename(a), rename(b))).or_default() += n;
                }
                key.specials = state
                    .specials
                    .iter()
                    .map(|&s| match s {
                        Special::Start(i, l) => Special::Start(i, rename(l)),
                        Special::End(i, l) => Special::End(i, rename(l)),
                        done => done,
                    })
                    .collect();
                if !out.contains(&key) {
                    out.insert(
                        key,
                        Back::Join {
                            left: i1,
                            right: i2,
                            merges: merge_path(&pred, at),
                        },
                    );
                }
            }
        }
    }
    out
}

/// Both children's pieces side by side, or `None` when some pair would get
/// two first pieces, two last pieces, or a second piece next to a full path.
fn disjoint_union(k1: &Key, k2: &Key) -> Option<Key> {
    let mut starts = BTreeSet::new();
    let mut ends = BTreeSet::new();
    let mut done = BTreeSet::new();
    for s in k1.specials.iter().chain(&k2.specials) {
        let fresh = match *s {
            Special::Start(i, _) => starts.insert(i),
            Special::End(i, _) => ends.insert(i),
            Special::Done(i) => done.insert(i),
        };
        if !fresh {
            return None;
        }
    }
    if done.iter().any(|i| starts.contains(i) || ends.contains(i)) {
        return None;
    }
    let mut key = Key {
        normals: k1.normals.clone(),
        ..Key::default()
    };
    for (&(a, b), &n) in &k2.normals {
        *key.normals.entry((a + RIGHT, b + RIGHT)).or_default() += n;
    }
    key.specials = k1.specials.clone();
    key.specials.extend(k2.specials.iter().map(|&s| match s {
        Special::Start(i, l) => Special::Start(i, l + RIGHT),
        Special::End(i, l) => Special::End(i, l + RIGHT),
        done => done,
    }));
    Some(key)
}

fn take_normal(key: &mut Key, p: (Label, Label)) {
    let n = key.normals.get_mut(&p).expect("missing piece");
    *n -= 1;
    if *n == 0 {
        key.normals.remove(&p);
    }
}

/// Every state reachable from `start` by merges across the two sides, with
/// the merge that first reached each one.
fn closure(start: Key, rows: &[u64]) -> (Vec<Key>, Vec<Option<(usize, Merge)>>) {
    let mut states = vec![start.clone()];
    let mut pred = vec![None];
    let mut seen: HashMap<Key, usize> = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([0]);
    while let Some(at) = queue.pop_front() {
        for (next, merge) in successors(&states[at], rows) {
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), states.len());
                states.push(next);
                pred.push(Some((at, merge)));
                queue.push_back(states.len() - 1);
            }
        }
    }
    (states, pred)
}

fn merge_path(pred: &[Option<(usize, Merge)>], mut at: usize) -> Vec<Merge> {
    let mut out = Vec::new();
    while let Some((p, m)) = pred[at] {
        out.push(m);
        at = p;
    }
    out.reverse();
    out
}

fn successors(state: &Key, rows: &[u64]) -> Vec<(Key, Merge)> {
    let mut out = Vec::new();
    let normals: Vec<((Label, Label), u32)> = state.normals.iter().map(|(&p, &n)| (p, n)).collect();
    let ends = |p: (Label, Label)| {
        if p.0 == p.1 {
            vec![p.0]
        } else {
            vec![p.0, p.1]
        }
    };
    for (ai, &(a, na)) in normals.iter().enumerate() {
        for &(b, _) in normals.iter().skip(ai) {
            if a == b && na < 2 {
                continue;
            }
            for &ea in &ends(a) {
                for &eb in &ends(b) {
                    if linked(rows, ea, eb) {
                        let mut next = state.clone();
                        take_normal(&mut next, a);
                        take_normal(&mut next, b);
                        *next
                            .normals
                            .entry(pair(other(a, ea), other(b, eb)))
                            .or_default() += 1;
                        let merge = Merge {
                            a: Item::Normal(a.0, a.1),
                            a_end: ea,
                            b: Item::Normal(b.0, b.1),
                            b_end: eb,
                        };
                        out.push((next, merge));
                    }
                }
            }
        }
    }
    for &sp in &state.specials {
        let (item, end) = match sp {
            Special::Start(i, l) => (Item::Start(i, l), l),
            Special::End(i, l) => (Item::End(i, l), l),
            Special::Done(_) => continue,
        };
        for &(b, _) in &normals {
            for &eb in &ends(b) {
                if linked(rows, end, eb) {
                    let mut next = state.clone();
                    next.specials.remove(&sp);
                    take_normal(&mut next, b);
                    next.specials.insert(match sp {
                        Special::Start(i, _) => Special::Start(i, other(b, eb)),
                        Special::End(i, _) => Special::End(i, other(b, eb)),
                        Special::Done(_) => unreachable!(),
                    });
                    let merge = Merge {
                        a: item,
                        a_end: end,
                        b: Item::Normal(b.0, b.1),
                        b_end: eb,
                    };
                    out.push((next, merge));
                }
            }
        }
        if let Special::Start(i, l) = sp {
            for &other_sp in &state.specials {
                if let Special::End(k, m) = other_sp {
                    if k == i && linked(rows, l, m) {
                        let mut next = state.clone();
                        next.specials.remove(&sp);
                        next.specials.remove(&other_sp);
                        next.specials.insert(Special::Done(i));
                        let merge = Merge {
                            a: item,
                            a_end: l,
                            b: Item::End(k, m),
                            b_end: m,
                        };
                        out.push((next, merge));
                    }
                }
            }
        }
    }
    out
}

/// A concrete piece: vertices in order, from the `s_i` side for terminal
/// pieces. `kind` reuses [`Special`] with labels ignored; loose pieces use
/// `Start(u16::MAX, _)`.
#[derive(Clone, Debug)]
struct Piece {
    kind: Special,
    verts: Vec<usize>,
}

const LOOSE: Special = Special::Start(u16::MAX, 0);

fn realize(
    ctx: &TwinContext,
    tables: &[Table<Key, Back>],
    t: usize,
    entry: usize,
) -> Result<Vec<Piece>> {
    match tables[t].value(entry) {
        Back::Leaf => {
            let v = ctx.rd.nodes[t].vertex.expect("leaf without vertex");
            let key = tables[t].key(entry);
            let kind = match key.specials.first() {
                Some(&Special::Start(i, _)) => Special::Start(i, 0),
                Some(&Special::End(i, _)) => Special::End(i, 0),
                Some(&Special::Done(i)) => Special::Done(i),
                None => LOOSE,
            };
            Ok(vec![Piece {
                kind,
                verts: vec![v],
            }])
        }
        Back::Join {
            left,
            right,
            merges,
        } => {
            let (l, r) = (ctx.rd.nodes[t].children[0], ctx.rd.nodes[t].children[1]);
            let mut pieces = realize(ctx, tables, l, *left)?;
            pieces.extend(realize(ctx, tables, r, *right)?);
            let label = |v: usize| -> Label {
                match ctx.slot(l, v) {
                    Some(j) => j as Label,
                    None => ctx.slot(r, v).expect("vertex below neither child") as Label + RIGHT,
                }
            };
            let item = |p: &Piece| -> Option<Item> {
                let (first, last) = (label(p.verts[0]), label(*p.verts.last().unwrap()));
                match p.kind {
                    LOOSE => Some(Item::Normal(first.min(last), first.max(last))),
                    Special::Start(i, _) => Some(Item::Start(i, last)),
                    Special::End(i, _) => Some(Item::End(i, first)),
                    Special::Done(_) => None,
                }
            };
            for m in merges {
                let missing = || Error::internal("merge does not match the realized pieces");
                let ia = pieces
                    .iter()
                    .position(|p| item(p) == Some(m.a))
                    .ok_or_else(missing)?;
                let ib = (0..pieces.len())
                    .find(|&k| k != ia && item(&pieces[k]) == Some(m.b))
                    .ok_or_else(missing)?;
                let (hi, lo) = (ia.max(ib), ia.min(ib));
                let p_hi = pieces.swap_remove(hi);
                let p_lo = pieces.swap_remove(lo);
                let (mut a, mut b) = if ia > ib { (p_hi, p_lo) } else { (p_lo, p_hi) };
                if a.kind == LOOSE && label(*a.verts.last().unwrap()) != m.a_end {
                    a.verts.reverse();
                }
                if b.kind == LOOSE && label(b.verts[0]) != m.b_end {
                    b.verts.reverse();
                }
                let merged = match (a.kind, b.kind) {
                    (Special::End(i, _), LOOSE) => {
                        b.verts.reverse();
                        b.verts.extend(a.verts);
                        Piece {
                            kind: Special::End(i, 0),
                            verts: b.verts,
                        }
                    }
                    (Special::Start(i, _), Special::End(..)) => {
                        a.verts.extend(b.verts);
                        Piece {
                            kind: Special::Done(i),
                            verts: a.verts,
                        }
                    }
                    (kind, _) => {
                        a.verts.extend(b.verts);
                        Piece {
                            kind,
                            verts: a.verts,
                        }
                    }
                };
                pieces.push(merged);
            }
            Ok(pieces)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulator::testutil::instance;
    use crate::testutil::set;

    /// Whether the pairs can be routed, by growing paths one vertex at a time.
    fn brute(g: &Graph, x: &VertexSet, pairs: &[(usize, usize)]) -> bool {
        fn grow(
            g: &Graph,
            x: &VertexSet,
            pairs: &[(usize, usize)],
            i: usize,
            at: usize,
            used: &mut Vec<bool>,
            direct: &mut BTreeSet<(usize, usize)>,
        ) -> bool {
            let Some(&(s, t)) = pairs.get(i) else {
                return g.vertices().all(|v| x.contains(v) || used[v]);
            };
            if at == usize::MAX {
                return grow(g, x, pairs, i, s, used, direct);
            }
            if at != s && g.has_edge(at, t) && grow(g, x, pairs, i + 1, usize::MAX, used, direct) {
                return true;
            }
            if at == s && g.has_edge(s, t) && direct.insert((s.min(t), s.max(t))) {
                if grow(g, x, pairs, i + 1, usize::MAX, used, direct) {
                    return true;
                }
                direct.remove(&(s.min(t), s.max(t)));
            }
            for v in g.neighbors(at).iter() {
                if !x.contains(v) && !used[v] {
                    used[v] = true;
                    if grow(g, x, pairs, i, v, used, direct) {
                        return true;
                    }
                    used[v] = false;
                }
            }
            false
        }
        grow(
            g,
            x,
            pairs,
            0,
            usize::MAX,
            &mut vec![false; g.n()],
            &mut BTreeSet::new(),
        )
    }

    fn check_cover(g: &Graph, x: &VertexSet, pairs: &[(usize, usize)], paths: &[Vec<usize>]) {
        assert_eq!(paths.len(), pairs.len());
        let mut seen = VertexSet::new();
        let mut direct = BTreeSet::new();
        for (p, &(s, t)) in paths.iter().zip(pairs) {
            assert_eq!((p[0], *p.last().unwrap()), (s, t));
            for w in p.windows(2) {
                assert!(g.has_edge(w[0], w[1]), "{p:?}");
            }
            if p.len() == 2 {
                assert!(direct.insert((s.min(t), s.max(t))));
            }
            for &v in &p[1..p.len() - 1] {
                assert!(!x.contains(v));
                assert!(seen.insert(v));
            }
        }
        assert_eq!(seen, g.vertex_set().difference(x));
    }

    fn run(
        g: &Graph,
        x: &VertexSet,
        pairs: &[(usize, usize)],
        rd: &RankDecomposition,
        c: usize,
    ) -> bool {
        let got = disjoint_paths_cover(g, x, pairs, rd, c).unwrap();
        if let Some(paths) = &got {
            check_cover(g, x, pairs, paths);
        }
        got.is_some()
    }

    #[test]
    fn two_vertex_route() {
        // s=2, t=3, a=0, b=1.
        let g = Graph::from_edges(4, [(2, 0), (0, 1), (1, 3)]).unwrap();
        let rd = RankDecomposition::caterpillar(&[0, 1]).with_width(&g, &set(&[0, 1]));
        assert!(run(&g, &set(&[2, 3]), &[(2, 3)], &rd, 1));
        assert!(!run(&g, &set(&[2, 3]), &[(3, 2), (2, 3)], &rd, 1));
    }

    #[test]
    fn unreachable_vertex() {
        let g = Graph::from_edges(3, [(0, 2)]).unwrap();
        assert!(!run(
            &g,
            &set(&[1, 2]),
            &[(1, 2)],
            &RankDecomposition::single(0),
            1
        ));
    }

    #[test]
    fn empty_instances() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let all = g.vertex_set();
        assert!(run(&g, &all, &[], &RankDecomposition::default(), 1));
        assert!(run(
            &g,
            &all,
            &[(0, 1), (1, 2)],
            &RankDecomposition::default(),
            1
        ));
        assert!(!run(&g, &all, &[(0, 2)], &RankDecomposition::default(), 1));
        assert!(!run(
            &g,
            &all,
            &[(0, 1), (1, 0)],
            &RankDecomposition::default(),
            1
        ));
        assert!(!run(
            &g,
            &set(&[0, 2]),
            &[],
            &RankDecomposition::single(1),
            1
        ));
    }

    #[test]
    fn parallel_pairs_close_a_cycle() {
        // u=0, v=1 joined through a=2 and b=3.
        let g = Graph::from_edges(4, [(0, 2), (2, 1), (0, 3), (3, 1)]).unwrap();
        let rd = RankDecomposition::caterpillar(&[2, 3]).with_width(&g, &set(&[2, 3]));
        assert!(run(&g, &set(&[0, 1]), &[(0, 1), (0, 1)], &rd, 1));
        assert!(!run(&g, &set(&[0, 1]), &[(0, 1)], &rd, 1));
    }

    #[test]
    fn rejects_bad_pairs() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let rd = RankDecomposition::single(1);
        assert!(disjoint_paths_cover(&g, &set(&[0, 2]), &[(0, 0)], &rd, 1).is_err());
        assert!(disjoint_paths_cover(&g, &set(&[0, 2]), &[(0, 1)], &rd, 1).is_err());
    }

    #[test]
    fn agrees_with_search() {
        let mut positives = 0;
        for seed in 0..200 {
            let inst = instance(1_000 + seed);
            let xs = inst.x.to_vec();
            let mut pairs = Vec::new();
            for (k, &s) in xs.iter().enumerate() {
                for &t in &xs[k + 1..] {
                    if !(s * 7 + t * 3 + seed as usize).is_multiple_of(3) {
                        pairs.push((s, t));
                    }
                }
            }
            pairs.truncate(xs.len());
            let got = run(&inst.g, &inst.x, &pairs, &inst.rd, inst.c);
            assert_eq!(
                got,
                brute(&inst.g, &inst.x, &pairs),
                "seed {seed} pairs {pairs:?}"
            );
            positives += usize::from(got);
        }
        assert!(positives >= 20, "only {positives} routable instances");
    }
}
