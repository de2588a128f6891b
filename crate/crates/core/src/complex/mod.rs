//! Cells of the product cubical structure on `G^n` and the no-k-collision
//! subcomplex `DConf^k(G, n)`.
//!
//! A cell is an `n`-tuple whose entries are vertices or edges of one graph.
//! Its dimension is the number of edge entries. For a vertex `v`, the closure
//! count `eta(v, closure)` is the number of entries whose closure contains
//! `v`; a cell lies in `DConf^k(G, n)` exactly when every closure count is at
//! most `k - 1`.

mod enumerate;
mod view;

use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};

pub use enumerate::{enumerate_dconf, DEFAULT_CELL_BUDGET};
pub use view::{read_cell_stream, ComplexHeader, ComplexView, FaceEntry, FaceTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` names both a vertex and an edge; use a tagged form")]
    AmbiguousLabel(String),
    #[error("closure counts are only defined at vertices")]
    ClosureOfEdge,
    #[error("a zero-dimensional cell has no faces")]
    ZeroDimensional,
    #[error("malformed cell key `{0}`")]
    MalformedKey(String),
    #[error("cell budget of {budget} cells exceeded")]
    BudgetExceeded { budget: usize },
    #[error("invalid parameters: need 2 <= k <= n <= 64, got k={k}, n={n}")]
    InvalidParameters { k: usize, n: usize },
    #[error("cell `{0}` has a face missing from the complex")]
    NotFaceClosed(String),
    #[error("cell `{cell}` has length {len}, expected {n}")]
    WrongLength { cell: String, len: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// One entry of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Vertex(VertexId),
    Edge(EdgeId),
}

impl Coord {
    pub fn is_edge(self) -> bool {
        matches!(self, Coord::Edge(_))
    }

    /// Whether `v` lies in the closure of this entry.
    #[inline]
    pub fn touches(self, g: &Graph, v: VertexId) -> bool {
        match self {
            Coord::Vertex(u) => u == v,
            Coord::Edge(e) => g.is_incident(e, v),
        }
    }

    pub fn label(self, g: &Graph) -> &str {
        match self {
            Coord::Vertex(v) => g.vertex_label(v),
            Coord::Edge(e) => g.edge_label(e),
        }
    }

    pub fn key(self, g: &Graph) -> String {
        match self {
            Coord::Vertex(v) => format!("v:{}", g.vertex_label(v)),
            Coord::Edge(e) => format!("e:{}", g.edge_label(e)),
        }
    }

    pub fn belongs_to(self, g: &Graph) -> bool {
        match self {
            Coord::Vertex(v) => v.index() < g.vertex_count(),
            Coord::Edge(e) => e.index() < g.edge_count(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EtaMode {
    /// entries equal to the item
    At,
    /// entries whose closure contains the vertex
    Closure,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell(Box<[Coord]>);

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl From<Vec<Coord>> for Cell {
    fn from(v: Vec<Coord>) -> Self {
        Cell(v.into_boxed_slice())
    }
}

impl Cell {
    pub fn new(coords: Vec<Coord>) -> Self {
        Cell(coords.into_boxed_slice())
    }

    pub fn coords(&self) -> &[Coord] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.iter().filter(|c| c.is_edge()).count()
    }

    pub fn get(&self, t: usize) -> Coord {
        self.0[t]
    }

    /// Copy with entry `t` replaced.
    pub fn with(&self, t: usize, c: Coord) -> Cell {
        let mut v = self.0.to_vec();
        v[t] = c;
        Cell::new(v)
    }

    /// Canonical serialization: tagged entries joined by `|`, e.g. `e:qr|v:p`.
    pub fn key(&self, g: &Graph) -> String {
        self.0.iter().map(|c| c.key(g)).collect::<Vec<_>>().join("|")
    }

    pub fn parse(g: &Graph, key: &str) -> Result<Cell, ComplexError> {
        let mut coords = Vec::new();
        for part in key.split('|') {
            let (tag, label) = part
                .split_once(':')
                .ok_or_else(|| ComplexError::MalformedKey(key.to_string()))?;
            let c = match tag {
                "v" => Coord::Vertex(
                    g.vertex_id(label)
                        .ok_or_else(|| ComplexError::UnknownLabel(label.to_string()))?,
                ),
                "e" => Coord::Edge(
                    g.edge_id(label)
                        .ok_or_else(|| ComplexError::UnknownLabel(label.to_string()))?,
                ),
                _ => return Err(ComplexError::MalformedKey(key.to_string())),
            };
            coords.push(c);
        }
        Ok(Cell::new(coords))
    }

    /// Builds a cell from untagged labels, resolving each as a vertex or an
    /// edge of `g`.
    pub fn from_labels(g: &Graph, labels: &[&str]) -> Result<Cell, ComplexError> {
        labels
            .iter()
            .map(|&l| match (g.vertex_id(l), g.edge_id(l)) {
                (Some(v), None) => Ok(Coord::Vertex(v)),
                (None, Some(e)) => Ok(Coord::Edge(e)),
                (Some(_), Some(_)) => Err(ComplexError::AmbiguousLabel(l.to_string())),
                (None, None) => Err(ComplexError::UnknownLabel(l.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Cell::new)
    }
}

/// Number of entries equal to vertex `v`.
#[inline]
pub fn eta_vertex(cell: &Cell, v: VertexId) -> usize {
    cell.0.iter().filter(|&&c| c == Coord::Vertex(v)).count()
}

/// Number of entries equal to edge `e`.
#[inline]
pub fn eta_edge(cell: &Cell, e: EdgeId) -> usize {
    cell.0.iter().filter(|&&c| c == Coord::Edge(e)).count()
}

/// Number of entries whose closure contains `v`.
#[inline]
pub fn eta_closure(g: &Graph, cell: &Cell, v: VertexId) -> usize {
    cell.0.iter().filter(|c| c.touches(g, v)).count()
}

/// The set of entries whose closure contains `v`, as a bitmask over positions.
#[inline]
pub fn closure_mask(g: &Graph, cell: &Cell, v: VertexId) -> u64 {
    cell.0
        .iter()
        .enumerate()
        .filter(|(_, c)| c.touches(g, v))
        .fold(0, |m, (t, _)| m | (1 << t))
}

/// The set of entries equal to `item`, as a bitmask over positions.
#[inline]
pub fn coord_mask(cell: &Cell, item: Coord) -> u64 {
    cell.0
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == item)
        .fold(0, |m, (t, _)| m | (1 << t))
}

pub fn eta(g: &Graph, cell: &Cell, item: Coord, mode: EtaMode) -> Result<usize, ComplexError> {
    if !item.belongs_to(g) {
        return Err(ComplexError::UnknownLabel(format!("{item:?}")));
    }
    match (item, mode) {
        (Coord::Vertex(v), EtaMode::At) => Ok(eta_vertex(cell, v)),
        (Coord::Edge(e), EtaMode::At) => Ok(eta_edge(cell, e)),
        (Coord::Vertex(v), EtaMode::Closure) => Ok(eta_closure(g, cell, v)),
        (Coord::Edge(_), EtaMode::Closure) => Err(ComplexError::ClosureOfEdge),
    }
}

/// Closure counts at every vertex.
pub fn closure_counts(g: &Graph, cell: &Cell) -> Vec<usize> {
    let mut counts = vec![0; g.vertex_count()];
    for &c in cell.coords() {
        match c {
            Coord::Vertex(v) => counts[v.index()] += 1,
            Coord::Edge(e) => {
                let [a, b] = g.ends(e);
                counts[a.index()] += 1;
                if b != a {
                    counts[b.index()] += 1;
                }
            }
        }
    }
    counts
}

/// Whether `cell` has at most `k - 1` entries touching each vertex.
pub fn is_dconf_cell(g: &Graph, k: usize, cell: &Cell) -> bool {
    closure_counts(g, cell).iter().all(|&c| c < k)
}

/// Codimension-one faces: each edge entry replaced by each of its endpoints,
/// paired with the position that changed.
pub fn codim1_faces(g: &Graph, cell: &Cell) -> Result<Vec<(usize, Cell)>, ComplexError> {
    let mut out = Vec::new();
    for (t, &c) in cell.coords().iter().enumerate() {
        if let Coord::Edge(e) = c {
            for end in g.ends(e) {
                out.push((t, cell.with(t, Coord::Vertex(end))));
            }
        }
    }
    if out.is_empty() {
        return Err(ComplexError::ZeroDimensional);
    }
    Ok(out)
}

/// Number of entries that are edges at `v` outside `excluded`.
pub fn ext_count(g: &Graph, cell: &Cell, v: VertexId, excluded: &[EdgeId]) -> usize {
    cell.coords()
        .iter()
        .filter(|&&c| match c {
            Coord::Edge(e) => g.is_incident(e, v) && !excluded.contains(&e),
            Coord::Vertex(_) => false,
        })
        .count()
}
