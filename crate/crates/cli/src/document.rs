//! JSON form of a nice decomposition, tied to its graph by a fingerprint.
//! Vertex ids are 0-based.

use serde::{Deserialize, Serialize};

use rctw::decomposition::{
    Component, NiceHTreeDecomposition, NiceNode, NodeKind, RankDecomposition, RdNode,
};
use rctw::{Graph, VertexSet};

pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub n: usize,
    pub m: usize,
    /// Hex digest of the edge set, independent of edge order.
    pub edge_hash: String,
}

impl Fingerprint {
    pub fn of(g: &Graph) -> Self {
        let hash = g
            .edges()
            .map(|(u, v)| splitmix((u as u64) << 32 | v as u64))
            .fold(0u64, u64::wrapping_add);
        Self {
            n: g.n(),
            m: g.m(),
            edge_hash: format!("{hash:016x}"),
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RdNodeDoc {
    pub id: usize,
    pub children: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub vertices: Vec<usize>,
    pub rank_width: usize,
    pub rank_decomposition: Vec<RdNodeDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsoNodeDoc {
    pub id: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDocument {
    pub version: u32,
    pub fingerprint: Fingerprint,
    pub c: usize,
    pub width: usize,
    pub modulator: Vec<usize>,
    pub components: Vec<ComponentDoc>,
    pub torso: Vec<TorsoNodeDoc>,
}

impl DecompositionDocument {
    pub fn new(g: &Graph, d: &NiceHTreeDecomposition) -> Self {
        let components = d
            .components
            .iter()
            .map(|comp| ComponentDoc {
                vertices: comp.vertices.to_vec(),
                rank_width: comp.rd.width,
                rank_decomposition: comp
                    .rd
                    .nodes
                    .iter()
                    .enumerate()
                    .map(|(id, n)| RdNodeDoc {
                        id,
                        children: n.children.clone(),
                        vertex: n.vertex,
                    })
                    .collect(),
            })
            .collect();
        let torso = d
            .nodes
            .iter()
            .enumerate()
            .map(|(id, t)| {
                let (vertex, component) = match t.kind {
                    NodeKind::Introduce(v) | NodeKind::Forget(v) => (Some(v), None),
                    NodeKind::Boundary(c) => (None, Some(c)),
                    NodeKind::Join | NodeKind::Leaf => (None, None),
                };
                TorsoNodeDoc {
                    id,
                    kind: t.kind.name().to_string(),
                    vertex,
                    component,
                    bag: t.bag.clone(),
                    children: t.children.clone(),
                }
            })
            .collect();
        Self {
            version: VERSION,
            fingerprint: Fingerprint::of(g),
            c: d.c,
            width: d.width,
            modulator: d.modulator.to_vec(),
            components,
            torso,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable document");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let doc: Self =
            serde_json::from_str(text).map_err(|e| format!("line {}: {e}", e.line()))?;
        if doc.version != VERSION {
            return Err(format!("unsupported document version {}", doc.version));
        }
        Ok(doc)
    }

    /// The decomposition described by the document. Only the shape is
    /// checked here; validity against the graph is the validator's job.
    pub fn decomposition(&self) -> Result<NiceHTreeDecomposition, String> {
        let mut components = Vec::with_capacity(self.components.len());
        for (ci, comp) in self.components.iter().enumerate() {
            let mut nodes = Vec::with_capacity(comp.rank_decomposition.len());
            for (i, n) in comp.rank_decomposition.iter().enumerate() {
                if n.id != i {
                    return Err(format!("component {ci}: node {i} has id {}", n.id));
                }
                nodes.push(RdNode {
                    children: n.children.clone(),
                    vertex: n.vertex,
                });
            }
            components.push(Component {
                vertices: comp.vertices.iter().copied().collect::<VertexSet>(),
                rd: RankDecomposition {
                    nodes,
                    width: comp.rank_width,
                },
            });
        }
        let mut nodes = Vec::with_capacity(self.torso.len());
        for (i, t) in self.torso.iter().enumerate() {
            if t.id != i {
                return Err(format!("torso node {i} has id {}", t.id));
            }
            let need_vertex = || {
                t.vertex
                    .ok_or_else(|| format!("torso node {i}: {} without vertex", t.kind))
            };
            let kind = match t.kind.as_str() {
                "join" => NodeKind::Join,
                "leaf" => NodeKind::Leaf,
                "introduce" => NodeKind::Introduce(need_vertex()?),
                "forget" => NodeKind::Forget(need_vertex()?),
                "boundary" => NodeKind::Boundary(
                    t.component
                        .ok_or_else(|| format!("torso node {i}: boundary without component"))?,
                ),
                other => return Err(format!("torso node {i}: unknown kind `{other}`")),
            };
            nodes.push(NiceNode {
                kind,
                bag: t.bag.clone(),
                children: t.children.clone(),
            });
        }
        Ok(NiceHTreeDecomposition {
            modulator: self.modulator.iter().copied().collect(),
            nodes,
            components,
            c: self.c,
            width: self.width,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fingerprint_ignores_edge_order() {
        let a = Graph::from_edges(4, [(0, 1), (2, 3), (1, 2)]).unwrap();
        let b = Graph::from_edges(4, [(2, 1), (3, 2), (1, 0)]).unwrap();
        assert_eq!(Fingerprint::of(&a), Fingerprint::of(&b));
        let c = Graph::from_edges(4, [(0, 1), (2, 3), (0, 2)]).unwrap();
        assert_ne!(Fingerprint::of(&a), Fingerprint::of(&c));
    }

    #[test]
    fn rejects_unknown_kinds_and_versions() {
        let g = Graph::new(1);
        let mut doc = DecompositionDocument::new(&g, &NiceHTreeDecomposition::default());
        doc.torso.push(TorsoNodeDoc {
            id: 0,
            kind: "fork".into(),
            vertex: None,
            component: None,
            bag: vec![0],
            children: vec![],
        });
        assert!(doc.decomposition().unwrap_err().contains("unknown kind"));
        doc.version = 7;
        assert!(DecompositionDocument::from_json(&doc.to_json())
            .unwrap_err()
            .contains("version"));
    }
}
