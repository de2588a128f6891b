//! Finite multigraphs with labelled vertices and edges.
//!
//! Vertex and edge ids are positions in the graph's internal tables. They are
//! stable under [`subdivide_edge`](crate::subdivision::subdivide_edge): the new
//! vertex is appended, one half of the split edge takes the old edge's slot and
//! the other half is appended. Cells of the two graphs can therefore be compared
//! coordinate by coordinate without relabelling.

mod families;
pub(crate) mod primitive;
mod sufficiency;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use families::{cycle, path, path_of, star, theta};
pub use primitive::{primitive_graph, PrimitiveGraph};
pub use sufficiency::{check_sufficiently_subdivided, SubdivReport, Violation, ViolationKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex label `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge label `{0}`")]
    UnknownEdge(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge label `{0}`")]
    DuplicateEdge(String),
    #[error("label `{0}` is empty or contains a reserved character ('|')")]
    InvalidLabel(String),
    #[error("edge `{edge}` has undeclared endpoint `{vertex}`")]
    UndeclaredEndpoint { edge: String, vertex: String },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("invalid parameters: need 2 <= k <= n, got k={k}, n={n}")]
    InvalidParameters { k: usize, n: usize },
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub label: String,
    pub ends: [VertexId; 2],
}

impl EdgeRecord {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

/// A finite multigraph. Loops and parallel edges are allowed.
#[derive(Clone)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<EdgeRecord>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    // one entry per edge-end, so loops appear twice
    incidence: Vec<Vec<EdgeId>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                format!(
                    "{}:{}-{}",
                    e.label,
                    self.vertex_label(e.ends[0]),
                    self.vertex_label(e.ends[1])
                )
            })
            .collect();
        f.debug_struct("Graph")
            .field("vertices", &self.vertices)
            .field("edges", &edges)
            .finish()
    }
}

fn check_label(label: &str) -> Result<(), GraphError> {
    if label.is_empty() || label.contains('|') {
        return Err(GraphError::InvalidLabel(label.to_string()));
    }
    Ok(())
}

impl Graph {
    /// Builds a graph from vertex labels and `(edge label, end, end)` triples.
    /// Table order is kept as given.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut g = Graph {
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
            incidence: Vec::new(),
        };
        for v in vertices {
            g.push_vertex(v.into())?;
        }
        for (label, u, v) in edges {
            let u = g.vertex_id(&u).ok_or_else(|| GraphError::UndeclaredEndpoint {
                edge: label.clone(),
                vertex: u.clone(),
            })?;
            let v = g.vertex_id(&v).ok_or_else(|| GraphError::UndeclaredEndpoint {
                edge: label.clone(),
                vertex: v.clone(),
            })?;
            g.push_edge(label, u, v)?;
        }
        Ok(g)
    }

    /// Convenience constructor from string slices: `[("pq", "p", "q"), ...]`.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self, GraphError> {
        Graph::new(
            vertices.iter().map(|v| v.to_string()),
            edges
                .iter()
                .map(|(l, u, v)| (l.to_string(), u.to_string(), v.to_string())),
        )
    }

    pub(crate) fn push_vertex(&mut self, label: String) -> Result<VertexId, GraphError> {
        check_label(&label)?;
        if self.vertex_index.contains_key(&label) {
            return Err(GraphError::DuplicateVertex(label));
        }
        let id = VertexId(self.vertices.len() as u32);
        self.vertex_index.insert(label.clone(), id);
        self.vertices.push(label);
        self.incidence.push(Vec::new());
        Ok(id)
    }

    pub(crate) fn push_edge(&mut self, label: String, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        check_label(&label)?;
        if self.edge_index.contains_key(&label) {
            return Err(GraphError::DuplicateEdge(label));
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edge_index.insert(label.clone(), id);
        self.edges.push(EdgeRecord { label, ends: [u, v] });
        self.incidence[u.index()].push(id);
        self.incidence[v.index()].push(id);
        Ok(id)
    }

    /// Replaces the edge in slot `id` by a new edge, keeping the id.
    pub(crate) fn replace_edge(&mut self, id: EdgeId, label: String, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        check_label(&label)?;
        if self.edge_index.contains_key(&label) {
            return Err(GraphError::DuplicateEdge(label));
        }
        let old = self.edges[id.index()].clone();
        self.edge_index.remove(&old.label);
        for end in old.ends {
            let inc = &mut self.incidence[end.index()];
            let pos = inc.iter().position(|&e| e == id).expect("incidence out of sync");
            inc.remove(pos);
        }
        self.edge_index.insert(label.clone(), id);
        self.edges[id.index()] = EdgeRecord { label, ends: [u, v] };
        self.incidence[u.index()].push(id);
        self.incidence[v.index()].push(id);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn edge_label(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].label
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        &self.edges[e.index()]
    }

    pub fn ends(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e.index()].ends
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.vertex_index.get(label).copied()
    }

    pub fn edge_id(&self, label: &str) -> Option<EdgeId> {
        self.edge_index.get(label).copied()
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.vertex_index.contains_key(label) || self.edge_index.contains_key(label)
    }

    /// Edge ids at `v`, one entry per incidence (loops appear twice).
    pub fn incidences(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v.index()]
    }

    /// The endpoint of `e` opposite to `v` (`v` itself for a loop).
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let [a, b] = self.ends(e);
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_incident(&self, e: EdgeId, v: VertexId) -> bool {
        let [a, b] = self.ends(e);
        a == v || b == v
    }

    /// Number of edge-ends at `v`; a loop contributes 2.
    pub fn degree_of(&self, v: VertexId) -> usize {
        self.incidence[v.index()].len()
    }

    pub fn degree(&self, label: &str) -> Result<usize, GraphError> {
        let v = self
            .vertex_id(label)
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))?;
        Ok(self.degree_of(v))
    }

    /// Vertices of degree different from 2, in id order.
    pub fn essential_vertices(&self) -> Vec<VertexId> {
        self.vertex_ids().filter(|&v| self.degree_of(v) != 2).collect()
    }

    pub fn essential_vertex_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .essential_vertices()
            .into_iter()
            .map(|v| self.vertex_label(v).to_string())
            .collect();
        out.sort();
        out
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(EdgeRecord::is_loop)
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|e| {
            let [a, b] = e.ends;
            a != b && seen.insert((a.min(b), a.max(b)))
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([VertexId(0)]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &e in self.incidences(v) {
                let u = self.other_end(e, v);
                if !seen[u.index()] {
                    seen[u.index()] = true;
                    reached += 1;
                    queue.push_back(u);
                }
            }
        }
        reached == self.vertices.len()
    }

    pub fn ensure_connected(&self) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }

    /// Connected with every vertex of degree 2.
    pub fn is_cycle(&self) -> bool {
        self.is_connected() && self.vertex_ids().all(|v| self.degree_of(v) == 2)
    }

    /// The vertex with the lexicographically least label.
    pub fn least_vertex(&self) -> Option<VertexId> {
        self.vertex_ids().min_by(|&a, &b| self.vertex_label(a).cmp(self.vertex_label(b)))
    }

    /// Primitive vertices: those of degree other than 2, or the least vertex
    /// when the whole graph is a cycle.
    pub fn primitive_mask(&self) -> Vec<bool> {
        if self.is_cycle() {
            let least = self.least_vertex().expect("cycle has vertices");
            self.vertex_ids().map(|v| v == least).collect()
        } else {
            self.vertex_ids().map(|v| self.degree_of(v) != 2).collect()
        }
    }

    /// A copy with vertices and edges sorted by label. Two graphs that differ
    /// only in table order normalize to the same value.
    pub fn normalized(&self) -> Graph {
        let mut vs = self.vertices.clone();
        vs.sort();
        let mut es: Vec<(String, String, String)> = self
            .edges
            .iter()
            .map(|e| {
                let mut ends = [
                    self.vertex_label(e.ends[0]).to_string(),
                    self.vertex_label(e.ends[1]).to_string(),
                ];
                ends.sort();
                let [u, v] = ends;
                (e.label.clone(), u, v)
            })
            .collect();
        es.sort();
        Graph::new(vs, es).expect("normalizing a valid graph")
    }

    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.label.clone(),
                    ends: [
                        self.vertex_label(e.ends[0]).to_string(),
                        self.vertex_label(e.ends[1]).to_string(),
                    ],
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("graph serializes")
    }

    /// Parses the graph JSON format. The result is normalized, so input order
    /// does not matter.
    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let raw: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let g = Graph::new(
            raw.vertices,
            raw.edges.into_iter().map(|e| {
                let [u, v] = e.ends;
                (e.id, u, v)
            }),
        )?;
        Ok(g.normalized())
    }

    /// SHA-256 of the normalized JSON form, hex encoded.
    pub fn content_hash(&self) -> String {
        let canon = self.normalized().to_json();
        hex::encode(Sha256::digest(canon.as_bytes()))
    }

    /// Shortest-path distances (in edges) from `src`; `None` for unreachable.
    /// `skip` removes one edge from consideration.
    pub(crate) fn bfs(&self, src: VertexId, skip: Option<EdgeId>) -> (Vec<Option<usize>>, Vec<Option<EdgeId>>) {
        let mut dist = vec![None; self.vertices.len()];
        let mut via = vec![None; self.vertices.len()];
        dist[src.index()] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v.index()].unwrap();
            for &e in self.incidences(v) {
                if Some(e) == skip {
                    continue;
                }
                let u = self.other_end(e, v);
                if dist[u.index()].is_none() {
                    dist[u.index()] = Some(d + 1);
                    via[u.index()] = Some(e);
                    queue.push_back(u);
                }
            }
        }
        (dist, via)
    }
}

/// Serialized form: `{"vertices": [...], "edges": [{"id": "e0", "ends": ["p", "q"]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub id: String,
    pub ends: [String; 2],
}
