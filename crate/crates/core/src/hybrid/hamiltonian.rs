use crate::decomposition::{Component, NiceHTreeDecomposition, RankDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::modulator::disjoint_paths_cover;
use crate::vertex_set::VertexSet;

use super::{offer, run, without, Back, Local, Records, Rules};

const FREE: u8 = 0xFE;
const FULL: u8 = 0xFF;

/// Partial path system seen from the bag. Per position: `FREE` (degree 0),
/// `FULL` (degree 2) or the position of the other end of its path.
/// `closed` marks a finished cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    ends: Vec<u8>,
    closed: bool,
}

impl State {
    fn empty(len: usize) -> Self {
        Self {
            ends: vec![FREE; len],
            closed: false,
        }
    }

    fn degree(&self, i: usize) -> usize {
        match self.ends[i] {
            FREE => 0,
            FULL => 2,
            _ => 1,
        }
    }

    /// Adds a path with ends `a` and `b`. Closing a cycle is allowed only
    /// when it leaves every position at degree 2.
    fn link(&mut self, a: usize, b: usize) -> bool {
        if self.closed || self.degree(a) == 2 || self.degree(b) == 2 {
            return false;
        }
        if self.ends[a] == b as u8 {
            self.ends[a] = FULL;
            self.ends[b] = FULL;
            self.closed = true;
            return self.ends.iter().all(|&e| e == FULL);
        }
        let far_a = if self.ends[a] == FREE {
            a
        } else {
            self.ends[a] as usize
        };
        let far_b = if self.ends[b] == FREE {
            b
        } else {
            self.ends[b] as usize
        };
        for end in [a, b] {
            if self.ends[end] != FREE {
                self.ends[end] = FULL;
            }
        }
        self.ends[far_a] = far_b as u8;
        self.ends[far_b] = far_a as u8;
        true
    }

    fn insert(&self, pos: usize) -> Self {
        let mut ends: Vec<u8> = self
            .ends
            .iter()
            .map(|&e| {
                if e < FREE && e as usize >= pos {
                    e + 1
                } else {
                    e
                }
            })
            .collect();
        ends.insert(pos, FREE);
        Self {
            ends,
            closed: self.closed,
        }
    }

    fn remove(&self, pos: usize) -> Self {
        let mut ends = self.ends.clone();
        ends.remove(pos);
        for e in &mut ends {
            if *e < FREE && *e as usize > pos {
                *e -= 1;
            }
        }
        Self {
            ends,
            closed: self.closed,
        }
    }
}

/// Loop-free multigraphs on `cap.len()` vertices with at most `max_edges`
/// edges in which vertex `a` has degree at most `cap[a] <= 2`, as edge lists
/// with repetition.
fn multigraphs(cap: &[usize], max_edges: usize) -> Vec<Vec<(usize, usize)>> {
    let len = cap.len();
    let pairs: Vec<(usize, usize)> = (0..len)
        .flat_map(|a| (a + 1..len).map(move |b| (a, b)))
        .filter(|&(a, b)| cap[a] > 0 && cap[b] > 0)
        .collect();
    let mut out = Vec::new();
    let mut degree = vec![0; len];
    let mut edges = Vec::new();
    struct Walk<'a> {
        pairs: &'a [(usize, usize)],
        cap: &'a [usize],
        max_edges: usize,
    }
    fn go(
        w: &Walk,
        i: usize,
        degree: &mut [usize],
        edges: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == w.pairs.len() {
            out.push(edges.clone());
            return;
        }
        let (a, b) = w.pairs[i];
        for m in 0..=2 {
            if degree[a] + m > w.cap[a] || degree[b] + m > w.cap[b] || edges.len() + m > w.max_edges
            {
                break;
            }
            degree[a] += m;
            degree[b] += m;
            edges.extend(std::iter::repeat_n((a, b), m));
            go(w, i + 1, degree, edges, out);
            edges.truncate(edges.len() - m);
            degree[a] -= m;
            degree[b] -= m;
        }
    }
    let walk = Walk {
        pairs: &pairs,
        cap,
        max_edges,
    };
    go(&walk, 0, &mut degree, &mut edges, &mut out);
    out
}

struct Hamiltonian<'a> {
    g: &'a Graph,
    c: usize,
}

fn path_edges(paths: &[Vec<usize>], original: impl Fn(usize) -> usize) -> Vec<(usize, usize)> {
    paths
        .iter()
        .flat_map(|p| p.windows(2).map(|w| (original(w[0]), original(w[1]))))
        .collect()
}

impl Hamiltonian<'_> {
    /// Cycle through `u` covering exactly `C`, as a path from `u` to a copy
    /// of `u` with the same neighbours in `C`.
    fn cycle_through(
        &self,
        local: &Local,
        u: usize,
        rd: &RankDecomposition,
    ) -> Result<Option<Vec<(usize, usize)>>> {
        let g = &local.sub.graph;
        let copy = g.n();
        let mut h = Graph::new(g.n() + 1);
        for (a, b) in g.edges() {
            h.add_edge(a, b)?;
        }
        for w in g.neighbors(u) {
            if !local.x.contains(w) {
                h.add_edge(copy, w)?;
            }
        }
        let mut x = local.x.clone();
        x.insert(copy);
        let paths = disjoint_paths_cover(&h, &x, &[(u, copy)], rd, self.c)?;
        Ok(paths.map(|p| path_edges(&p, |v| local.sub.original[if v == copy { u } else { v }])))
    }
}

impl Rules for Hamiltonian<'_> {
    type Key = State;
    type Value = ();
    /// Edges of `g` fixed at this node.
    type Note = Vec<(usize, usize)>;

    fn better(_new: &(), _old: &()) -> bool {
        false
    }

    fn leaf(&self, _v: usize, out: &mut Records<Self>) {
        offer::<Self>(out, State::empty(1), (), Back::None, Vec::new());
    }

    fn introduce(
        &self,
        _bag: &[usize],
        pos: usize,
        child: &Records<Self>,
        out: &mut Records<Self>,
    ) {
        for (i, key, _) in child.iter() {
            offer::<Self>(out, key.insert(pos), (), Back::One(i), Vec::new());
        }
    }

    /// The forgotten vertex takes edges to bag neighbours until it has
    /// degree 2.
    fn forget(
        &self,
        child_bag: &[usize],
        pos: usize,
        child: &Records<Self>,
        out: &mut Records<Self>,
    ) {
        let v = child_bag[pos];
        let nbrs: Vec<usize> = without(child_bag, pos)
            .filter(|&(_, w)| self.g.has_edge(v, w))
            .map(|(q, _)| q)
            .collect();
        for (i, key, _) in child.iter() {
            let mut choices: Vec<Vec<usize>> = Vec::new();
            match 2 - key.degree(pos) {
                0 => choices.push(Vec::new()),
                1 => choices.extend(nbrs.iter().map(|&a| vec![a])),
                _ => {
                    for (k, &a) in nbrs.iter().enumerate() {
                        choices.extend(nbrs[k + 1..].iter().map(|&b| vec![a, b]));
                    }
                }
            }
            for chosen in choices {
                let mut state = key.clone();
                if chosen.iter().all(|&q| state.link(pos, q)) {
                    let note = chosen.iter().map(|&q| (v, child_bag[q])).collect();
                    offer::<Self>(out, state.remove(pos), (), Back::One(i), note);
                }
            }
        }
    }

    fn join(
        &self,
        _bag: &[usize],
        left: &Records<Self>,
        right: &Records<Self>,
        out: &mut Records<Self>,
    ) {
        for (i, a, _) in left.iter() {
            for (j, b, _) in right.iter() {
                if let Some(state) = merge(a, b) {
                    offer::<Self>(out, state, (), Back::Two(i, j), Vec::new());
                }
            }
        }
    }

    fn boundary(&self, bag: &[usize], comp: &Component, out: &mut Records<Self>) -> Result<()> {
        let mut local = Local::new(self.g, bag, comp)?;
        // Bag edges are taken at forget nodes only.
        let inner: Vec<(usize, usize)> = local
            .sub
            .graph
            .edges()
            .filter(|&(a, b)| local.x.contains(a) && local.x.contains(b))
            .collect();
        for (a, b) in inner {
            local.sub.graph.remove_edge(a, b);
        }
        let size = comp.vertices.len();
        match bag.len() {
            0 => {
                if size >= 3 {
                    let first = comp.vertices.first().expect("nonempty component");
                    let u = local.sub.local(first).expect("component vertex");
                    let mut rest = local.clone_without(u);
                    rest.rd = rest.rd.with_width(
                        &local.sub.graph,
                        &local.sub.graph.vertex_set().difference(&rest.x),
                    );
                    if let Some(edges) = self.cycle_through(&rest, u, &rest.rd)? {
                        offer::<Self>(
                            out,
                            State {
                                ends: Vec::new(),
                                closed: true,
                            },
                            (),
                            Back::None,
                            edges,
                        );
                    }
                }
            }
            1 => {
                if size >= 2 {
                    let u = local.sub.local(bag[0]).expect("bag vertex");
                    if let Some(edges) = self.cycle_through(&local, u, &local.rd)? {
                        offer::<Self>(
                            out,
                            State {
                                ends: vec![FULL],
                                closed: true,
                            },
                            (),
                            Back::None,
                            edges,
                        );
                    }
                }
            }
            _ => {
                let ids: Vec<usize> = bag
                    .iter()
                    .map(|&u| local.sub.local(u).expect("bag vertex"))
                    .collect();
                let cap: Vec<usize> = bag
                    .iter()
                    .map(|&u| self.g.neighbors(u).intersection_len(&comp.vertices).min(2))
                    .collect();
                for q in multigraphs(&cap, size) {
                    let mut state = State::empty(bag.len());
                    if !q.iter().all(|&(a, b)| state.link(a, b)) {
                        continue;
                    }
                    let pairs: Vec<(usize, usize)> =
                        q.iter().map(|&(a, b)| (ids[a], ids[b])).collect();
                    if let Some(paths) =
                        disjoint_paths_cover(&local.sub.graph, &local.x, &pairs, &local.rd, self.c)?
                    {
                        offer::<Self>(
                            out,
                            state,
                            (),
                            Back::None,
                            path_edges(&paths, |v| local.sub.original[v]),
                        );
                    }
                }
            }
        }
        Ok(())
    }
}

impl Local {
    /// Moves local vertex `u` from the component into the modulator.
    fn clone_without(&self, u: usize) -> Local {
        let mut x = self.x.clone();
        x.insert(u);
        Local {
            sub: self.sub.clone(),
            x,
            rd: self.rd.without_vertex(u),
        }
    }
}

/// Combines path systems of two subtrees sharing the bag.
fn merge(a: &State, b: &State) -> Option<State> {
    let idle = |s: &State| !s.closed && s.ends.iter().all(|&e| e == FREE);
    match (a.closed, b.closed) {
        (true, true) => return None,
        (true, false) => return idle(b).then(|| a.clone()),
        (false, true) => return idle(a).then(|| b.clone()),
        _ => {}
    }
    let mut state = a.clone();
    for (i, &e) in b.ends.iter().enumerate() {
        if e == FULL {
            if state.ends[i] != FREE {
                return None;
            }
            state.ends[i] = FULL;
        }
    }
    for (i, &e) in b.ends.iter().enumerate() {
        if e < FREE && i < e as usize && !state.link(i, e as usize) {
            return None;
        }
    }
    Some(state)
}

/// A Hamiltonian cycle of `g` as a vertex order, if one exists.
pub fn solve_hamiltonian(g: &Graph, d: &NiceHTreeDecomposition) -> Result<Option<Vec<usize>>> {
    let rules = Hamiltonian { g, c: d.c };
    let Some(run) = run(g, d, &rules)? else {
        return Ok(None);
    };
    if g.n() < 3 {
        return Ok(None);
    }
    let Some(entry) = run.tables[run.root].find(&State {
        ends: Vec::new(),
        closed: true,
    }) else {
        return Ok(None);
    };
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (t, i) in run.trace(run.root, entry) {
        for &(u, v) in &run.tables[t].value(i).note {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let bad = || Error::internal("reconstructed edges do not form a Hamiltonian cycle");
    if adj.iter().any(|a| a.len() != 2) {
        return Err(bad());
    }
    let mut order = vec![0];
    let mut seen = VertexSet::singleton(0);
    let mut at = 0;
    while let Some(&next) = adj[at].iter().find(|&&w| !seen.contains(w)) {
        if !g.has_edge(at, next) {
            return Err(bad());
        }
        seen.insert(next);
        order.push(next);
        at = next;
    }
    if order.len() != g.n() || !g.has_edge(at, 0) {
        return Err(bad());
    }
    Ok(Some(order))
}
