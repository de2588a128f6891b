use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Cell, ComplexError, Coord};
use crate::graph::Graph;

/// The cells of a cubical subcomplex of `G^n`, grouped by dimension.
///
/// Cells are stored sorted by `(dimension, entries)`, so indices are stable
/// for a given graph and cell set.
#[derive(Clone)]
pub struct ComplexView {
    graph: Arc<Graph>,
    k: usize,
    n: usize,
    cells: Vec<Cell>,
    dim_start: Vec<usize>,
    index: HashMap<Cell, u32>,
}

impl std::fmt::Debug for ComplexView {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComplexView")
            .field("k", &self.k)
            .field("n", &self.n)
            .field("counts", &self.counts())
            .finish()
    }
}

/// One codimension-one face of a cell: the face index, the position that
/// collapsed, and which end of that edge the face keeps (0 or 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceEntry {
    pub face: u32,
    pub coord: u8,
    pub end: u8,
}

/// Face lists of every cell of a view, in compressed row form.
#[derive(Clone, Debug)]
pub struct FaceTable {
    offsets: Vec<u32>,
    entries: Vec<FaceEntry>,
}

impl FaceTable {
    pub fn faces(&self, cell: usize) -> &[FaceEntry] {
        &self.entries[self.offsets[cell] as usize..self.offsets[cell + 1] as usize]
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// First line of the JSON-lines export.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexHeader {
    #[serde(rename = "g-hash")]
    pub g_hash: String,
    pub k: usize,
    pub n: usize,
    pub counts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CellLine {
    cell: String,
    dim: usize,
}

impl ComplexView {
    /// `cells` must be lexicographically sorted and duplicate-free.
    pub(crate) fn from_sorted_unique(graph: Arc<Graph>, k: usize, n: usize, cells: Vec<Cell>) -> Self {
        let mut by_dim: Vec<Vec<Cell>> = vec![Vec::new(); n + 1];
        for c in cells {
            by_dim[c.dim()].push(c);
        }
        let mut dim_start = Vec::with_capacity(n + 2);
        let mut all = Vec::new();
        for group in by_dim {
            dim_start.push(all.len());
            all.extend(group);
        }
        dim_start.push(all.len());
        let index = all
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
        ComplexView {
            graph,
            k,
            n,
            cells: all,
            dim_start,
            index,
        }
    }

    /// Builds a view from an arbitrary collection of cells over `graph`.
    /// Face-closedness is not checked here; see [`ComplexView::check_face_closed`].
    pub fn from_cells(
        graph: Arc<Graph>,
        k: usize,
        n: usize,
        cells: impl IntoIterator<Item = Cell>,
    ) -> Result<Self, ComplexError> {
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        for c in &cells {
            if c.len() != n {
                return Err(ComplexError::WrongLength {
                    cell: c.key(&graph),
                    len: c.len(),
                    n,
                });
            }
        }
        cells.par_sort_unstable();
        cells.dedup();
        Ok(Self::from_sorted_unique(graph, k, n, cells))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn dim_range(&self, d: usize) -> std::ops::Range<usize> {
        if d > self.n {
            return self.cells.len()..self.cells.len();
        }
        self.dim_start[d]..self.dim_start[d + 1]
    }

    pub fn cells_of_dim(&self, d: usize) -> &[Cell] {
        &self.cells[self.dim_range(d)]
    }

    pub fn dim_of(&self, i: usize) -> usize {
        self.dim_start.partition_point(|&s| s <= i) - 1
    }

    /// Number of cells in each dimension `0..=n`.
    pub fn counts(&self) -> Vec<usize> {
        (0..=self.n).map(|d| self.dim_range(d).len()).collect()
    }

    /// Highest dimension with a cell, if any.
    pub fn top_dim(&self) -> Option<usize> {
        (0..=self.n).rev().find(|&d| !self.dim_range(d).is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn index_of(&self, c: &Cell) -> Option<usize> {
        self.index.get(c).map(|&i| i as usize)
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.index.contains_key(c)
    }

    /// Face lists for every cell. Fails if some face is missing.
    pub fn face_table(&self) -> Result<FaceTable, ComplexError> {
        let g = &*self.graph;
        let per_cell: Vec<Result<Vec<FaceEntry>, ComplexError>> = self
            .cells
            .par_iter()
            .map(|cell| {
                let mut faces = Vec::new();
                for (t, &c) in cell.coords().iter().enumerate() {
                    if let Coord::Edge(e) = c {
                        for (end, v) in g.ends(e).into_iter().enumerate() {
                            let f = cell.with(t, Coord::Vertex(v));
                            let idx = self
                                .index_of(&f)
                                .ok_or_else(|| ComplexError::NotFaceClosed(cell.key(g)))?;
                            faces.push(FaceEntry {
                                face: idx as u32,
                                coord: t as u8,
                                end: end as u8,
                            });
                        }
                    }
                }
                Ok(faces)
            })
            .collect();
        let mut offsets = Vec::with_capacity(self.cells.len() + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for faces in per_cell {
            entries.extend(faces?);
            offsets.push(entries.len() as u32);
        }
        Ok(FaceTable { offsets, entries })
    }

    pub fn check_face_closed(&self) -> Result<(), ComplexError> {
        self.face_table().map(|_| ())
    }

    pub fn header(&self) -> ComplexHeader {
        ComplexHeader {
            g_hash: self.graph.content_hash(),
            k: self.k,
            n: self.n,
            counts: self.counts(),
        }
    }

    /// JSON-lines export: a header line, then one `{"cell", "dim"}` per cell.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        serde_json::to_writer(&mut w, &self.header())?;
        writeln!(w)?;
        for (i, c) in self.cells.iter().enumerate() {
            let line = CellLine {
                cell: c.key(&self.graph),
                dim: self.dim_of(i),
            };
            serde_json::to_writer(&mut w, &line)?;
            writeln!(w)?;
        }
        Ok(())
    }

    /// Plain cell stream: one canonical key per line.
    pub fn write_cell_stream<W: Write>(&self, mut w: W) -> io::Result<()> {
        for c in &self.cells {
            writeln!(w, "{}", c.key(&self.graph))?;
        }
        Ok(())
    }
}

/// Reads a cell stream written by [`ComplexView::write_cell_stream`]. Blank
/// lines are skipped.
pub fn read_cell_stream<R: BufRead>(g: &Graph, r: R) -> Result<Vec<Cell>, ComplexError> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| ComplexError::MalformedKey(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.push(Cell::parse(g, line)?);
    }
    Ok(out)
}

impl ComplexView {
    /// Reads back a JSON-lines export, checking the header against `graph`.
    pub fn read_jsonl<R: BufRead>(graph: Arc<Graph>, r: R) -> Result<ComplexView, ComplexError> {
        let mut lines = r.lines();
        let bad = |s: String| ComplexError::MalformedKey(s);
        let head = lines
            .next()
            .ok_or_else(|| bad("missing header".into()))?
            .map_err(|e| bad(e.to_string()))?;
        let header: ComplexHeader = serde_json::from_str(&head).map_err(|e| bad(e.to_string()))?;
        if header.g_hash != graph.content_hash() {
            return Err(bad("graph hash mismatch".into()));
        }
        let mut cells = Vec::new();
        for line in lines {
            let line = line.map_err(|e| bad(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let cl: CellLine = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
            cells.push(Cell::parse(&graph, &cl.cell)?);
        }
        let cv = ComplexView::from_cells(graph, header.k, header.n, cells)?;
        if cv.counts() != header.counts {
            return Err(bad("cell counts disagree with header".into()));
        }
        Ok(cv)
    }
}
