//! Random graphs made of a partial k-tree skeleton with bounded rank-width
//! components hanging off its bags.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rctw::compute::{exact_rankwidth, nicify, TorsoResult};
use rctw::decomposition::{Component, NiceHTreeDecomposition, TreeDecomposition};
use rctw::{Graph, VertexSet};

const KEEP_EDGE: f64 = 0.7;
const TRIES: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub skeleton_tw: usize,
    /// Skeleton vertices; defaults to `2 * (skeleton_tw + 1)`.
    pub skeleton_size: Option<usize>,
    pub component_rw: usize,
    pub components: usize,
    /// Component sizes are drawn from `component_size_min..=component_size`.
    pub component_size: usize,
    pub component_size_min: Option<usize>,
    pub seed: u64,
}

pub struct Generated {
    pub graph: Graph,
    /// Decomposition whose modulator is the union of the components.
    pub decomposition: NiceHTreeDecomposition,
}

pub fn generate(p: &GenParams) -> Result<Generated, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let k = p.skeleton_tw;
    let skeleton = p.skeleton_size.unwrap_or(2 * (k + 1));
    let (min_size, max_size) = (
        p.component_size_min.unwrap_or(p.component_size),
        p.component_size,
    );
    if p.components > 0 {
        if min_size > max_size || min_size == 0 {
            return Err(format!("component sizes {min_size}..={max_size} are empty"));
        }
        if p.component_rw >= 1 && min_size < 2 {
            return Err("components of positive rank-width need at least 2 vertices".into());
        }
        if p.component_rw == 0 && max_size != 1 {
            return Err("rank-width 0 components are single vertices".into());
        }
        if max_size > 14 {
            return Err("component size above 14".into());
        }
    }

    let mut edges = Vec::new();
    let td = skeleton_tree(&mut rng, skeleton, k, &mut edges);

    let mut parts: Vec<Graph> = Vec::new();
    for _ in 0..p.components {
        let size = rng.gen_range(min_size..=max_size);
        parts.push(component(&mut rng, p.component_rw, size)?);
    }

    let n = skeleton + parts.iter().map(Graph::n).sum::<usize>();
    let mut components = Vec::new();
    let mut offset = skeleton;
    for part in &parts {
        edges.extend(part.edges().map(|(u, v)| (u + offset, v + offset)));
        if !td.bags.is_empty() {
            let bag = td.bags.choose(&mut rng).expect("nonempty skeleton");
            let take = rng.gen_range(1..=bag.len());
            let attach: Vec<usize> = bag.choose_multiple(&mut rng, take).copied().collect();
            for a in attach {
                let mut hit: Vec<usize> = (0..part.n()).filter(|_| rng.gen_bool(0.5)).collect();
                if hit.is_empty() {
                    hit.push(rng.gen_range(0..part.n()));
                }
                edges.extend(hit.into_iter().map(|w| (a, w + offset)));
            }
        }
        let (width, rd) = exact_rankwidth(part).map_err(|e| e.to_string())?;
        if width > p.component_rw {
            return Err(format!("component of rank-width {width} generated"));
        }
        components.push(Component {
            vertices: (offset..offset + part.n()).collect(),
            rd: rd.map_vertices(|v| v + offset),
        });
        offset += part.n();
    }

    let graph = Graph::from_edges(n, edges).map_err(|e| e.to_string())?;
    let modulator: VertexSet = (skeleton..n).collect();
    let torso = graph.collapse(&modulator).map_err(|e| e.to_string())?;
    let result = TorsoResult {
        c: p.component_rw,
        modulator,
        torso,
        achieved_width: td.width(),
        torso_td: td,
        components,
    };
    let decomposition = nicify(&graph, &result).map_err(|e| e.to_string())?;
    Ok(Generated {
        graph,
        decomposition,
    })
}

/// A random k-tree on `n` vertices, returned as its tree decomposition;
/// each of its edges is kept with a fixed probability.
fn skeleton_tree(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    edges: &mut Vec<(usize, usize)>,
) -> TreeDecomposition {
    let mut td = TreeDecomposition::default();
    if n == 0 {
        return td;
    }
    let base = n.min(k + 1);
    td.bags.push((0..base).collect());
    td.children.push(Vec::new());
    for u in 0..base {
        for v in u + 1..base {
            if rng.gen_bool(KEEP_EDGE) {
                edges.push((u, v));
            }
        }
    }
    for v in base..n {
        let parent = rng.gen_range(0..td.bags.len());
        let mut bag = td.bags[parent].clone();
        bag.remove(rng.gen_range(0..bag.len()));
        for &u in &bag {
            if rng.gen_bool(KEEP_EDGE) {
                edges.push((u, v));
            }
        }
        bag.push(v);
        td.bags.push(bag);
        td.children.push(Vec::new());
        td.children[parent].push(v - base + 1);
    }
    td
}

/// A connected graph on `size` vertices of rank-width at most `rw`.
fn component(rng: &mut ChaCha8Rng, rw: usize, size: usize) -> Result<Graph, String> {
    let edges: Vec<(usize, usize)> = match rw {
        0 => Vec::new(),
        1 => match rng.gen_range(0..3) {
            0 => (0..size)
                .flat_map(|u| (u + 1..size).map(move |v| (u, v)))
                .collect(),
            1 => {
                let a = rng.gen_range(1..size);
                (0..a)
                    .flat_map(|u| (a..size).map(move |v| (u, v)))
                    .collect()
            }
            _ => distance_hereditary(rng, size),
        },
        _ => {
            for _ in 0..TRIES {
                let mut g = Graph::new(size);
                for u in 0..size {
                    for v in u + 1..size {
                        if rng.gen_bool(0.5) {
                            g.add_edge(u, v).map_err(|e| e.to_string())?;
                        }
                    }
                }
                if g.connected_components().len() == 1
                    && exact_rankwidth(&g).map_err(|e| e.to_string())?.0 == rw
                {
                    return Ok(g);
                }
            }
            return Err(format!(
                "no connected {size}-vertex graph of rank-width {rw} found"
            ));
        }
    };
    Graph::from_edges(size, edges).map_err(|e| e.to_string())
}

/// Grows a connected distance-hereditary graph from an edge by pendant
/// vertices and twins.
fn distance_hereditary(rng: &mut ChaCha8Rng, size: usize) -> Vec<(usize, usize)> {
    let mut adj: Vec<Vec<usize>> = vec![vec![1], vec![0]];
    for v in 2..size {
        let u = rng.gen_range(0..v);
        let mut nbrs = match rng.gen_range(0..3) {
            0 => vec![u],
            1 => adj[u].clone(),
            _ => {
                let mut n = adj[u].clone();
                n.push(u);
                n
            }
        };
        nbrs.sort_unstable();
        for &w in &nbrs {
            adj[w].push(v);
        }
        adj.push(nbrs);
    }
    adj.iter()
        .enumerate()
        .flat_map(|(u, ns)| ns.iter().filter(move |&&w| u < w).map(move |&w| (u, w)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rctw::decomposition::validate_nice_h_decomposition;

    fn params(seed: u64) -> GenParams {
        GenParams {
            skeleton_tw: 2,
            skeleton_size: None,
            component_rw: 1,
            components: 3,
            component_size: 6,
            component_size_min: Some(4),
            seed,
        }
    }

    #[test]
    fn emitted_decomposition_is_valid() {
        for seed in 0..20 {
            let mut p = params(seed);
            p.component_rw = 1 + seed as usize % 2;
            if p.component_rw == 2 {
                // Rank-width 2 needs at least five vertices.
                p.component_size_min = Some(5);
            }
            let gen = generate(&p).unwrap();
            let v = validate_nice_h_decomposition(&gen.graph, &gen.decomposition, true);
            assert!(v.is_empty(), "seed {seed}: {v:?}");
            assert!(gen.decomposition.width <= p.skeleton_tw);
            assert_eq!(gen.decomposition.components.len(), 3);
        }
    }

    #[test]
    fn no_components_gives_a_partial_k_tree() {
        let mut p = params(5);
        p.components = 0;
        let gen = generate(&p).unwrap();
        assert_eq!(gen.graph.n(), 6);
        assert!(gen.decomposition.modulator.is_empty());
    }

    #[test]
    fn distance_hereditary_pieces_have_rank_width_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for size in 2..10 {
            let g = Graph::from_edges(size, distance_hereditary(&mut rng, size)).unwrap();
            assert_eq!(g.connected_components().len(), 1);
            assert!(exact_rankwidth(&g).unwrap().0 <= 1);
        }
    }

    #[test]
    fn rejects_impossible_sizes() {
        let mut p = params(1);
        p.component_size_min = Some(1);
        assert!(generate(&p).is_err());
        p.component_size_min = Some(9);
        assert!(generate(&p).is_err());
    }
}
