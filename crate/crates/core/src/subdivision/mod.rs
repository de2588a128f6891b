//! A single edge subdivision `G -> G'` and the cell maps between
//! `DConf^k(G, n)` and `DConf^k(G', n)`.
//!
//! Ids are stable across the subdivision: `G'` keeps every vertex and edge id
//! of `G`, the new vertex `w` is appended, the half of `a` at `ends[0]` takes
//! the id of `a` and the other half is appended. A cell of `G` with no entry
//! `a` is therefore literally a cell of `G'`.

mod context;

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{
    closure_mask, coord_mask, is_dconf_cell, Cell, ComplexError, ComplexView, Coord,
};
use crate::graph::{EdgeId, Graph, GraphError, VertexId};

pub use context::{locate_h, ContextJson, HCase, OrientedEdge, SubdivisionContext};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("no edge labelled {0:?}")]
    StaleLabel(String),
    #[error("label {0:?} is already in use")]
    LabelCollision(String),
    #[error("{0:?} is not the vertex of a single edge subdivision")]
    NotSubdivisionVertex(String),
    #[error("{0} is not a cell of the configuration complex")]
    NotDConfCell(String),
    #[error("inflation and count tests disagree on {0}")]
    ExternalTestsDisagree(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

fn fresh_edge_label(g: &Graph, taken: &[&str], u: &str, v: &str) -> String {
    let (x, y) = if u <= v { (u, v) } else { (v, u) };
    let mut label = format!("{x}{y}");
    while g.edge_id(&label).is_some() || taken.contains(&label.as_str()) {
        label.push('\'');
    }
    label
}

/// Inserts a new vertex `w` in the interior of `edge`.
///
/// The two halves are labelled by their sorted endpoint labels, primed until
/// fresh. The returned graph keeps the ids of `g` as described in the module
/// docs.
pub fn subdivide_edge(g: &Graph, edge: &str, w: &str) -> Result<Graph, SubdivisionError> {
    let a = g
        .edge_id(edge)
        .ok_or_else(|| SubdivisionError::StaleLabel(edge.to_string()))?;
    if g.vertex_id(w).is_some() {
        return Err(SubdivisionError::LabelCollision(w.to_string()));
    }
    let [p, q] = g.ends(a);
    let (pl, ql) = (g.vertex_label(p).to_string(), g.vertex_label(q).to_string());
    let first = fresh_edge_label(g, &[edge], &pl, w);
    let second = fresh_edge_label(g, &[edge, &first], w, &ql);
    let mut out = g.clone();
    let wid = out.push_vertex(w.to_string())?;
    out.replace_edge(a, first, p, wid)?;
    out.push_edge(second, wid, q)?;
    Ok(out)
}

/// A label not used by any vertex of `g`: `w`, then `w1`, `w2`, ...
pub fn fresh_vertex_label(g: &Graph) -> String {
    if g.vertex_id("w").is_none() {
        return "w".to_string();
    }
    (1..)
        .map(|i| format!("w{i}"))
        .find(|l| g.vertex_id(l).is_none())
        .expect("unbounded supply")
}

impl SubdivisionContext {
    /// All replacements of `a`-entries by `v_1, w, v_{i+1}, e_1, e_{i+1}`,
    /// sorted and without repetitions.
    pub fn deflate(&self, x: &Cell, k: usize) -> Result<Vec<Cell>, SubdivisionError> {
        let g = self.g();
        if x.coords().iter().any(|c| !c.belongs_to(g)) || !is_dconf_cell(g, k, x) {
            return Err(SubdivisionError::NotDConfCell(format!("{:?}", x.coords())));
        }
        Ok(self.deflate_unchecked(x))
    }

    pub(crate) fn deflate_unchecked(&self, x: &Cell) -> Vec<Cell> {
        let a = Coord::Edge(self.a());
        let slots: Vec<usize> = (0..x.len()).filter(|&t| x.get(t) == a).collect();
        let targets = self.deflation_targets();
        let mut out = BTreeSet::new();
        let total = targets.len().pow(slots.len() as u32);
        let mut coords = x.coords().to_vec();
        for code in 0..total {
            let mut c = code;
            for &t in &slots {
                coords[t] = targets[c % targets.len()];
                c /= targets.len();
            }
            out.insert(Cell::new(coords.clone()));
        }
        out.into_iter().collect()
    }

    /// Replaces `w`, `e_1` and `e_{i+1}` by `a`.
    pub fn inflate(&self, x: &Cell) -> Cell {
        let (w, e1, ei1) = (self.w(), self.e(1).id, self.e(self.i() + 1).id);
        let a = Coord::Edge(self.a());
        Cell::new(
            x.coords()
                .iter()
                .map(|&c| match c {
                    Coord::Vertex(v) if v == w => a,
                    Coord::Edge(e) if e == e1 || e == ei1 => a,
                    other => other,
                })
                .collect(),
        )
    }

    /// External: the inflation is not a cell of `DConf^k(G, n)`.
    pub fn external_by_inflation(&self, x: &Cell, k: usize) -> bool {
        !is_dconf_cell(self.g(), k, &self.inflate(x))
    }

    /// External: `eta(w, cl x) + eta(v_s, cl x) - eta(e_s, x) >= k` for
    /// `s = 1` or `s = i + 1`. When `a` is a loop both `e_1` and `e_{i+1}`
    /// join `w` to the same vertex and both are subtracted.
    pub fn external_by_counts(&self, x: &Cell, k: usize) -> bool {
        let g = self.g_sub();
        let eta_w = closure_mask(g, x, self.w()).count_ones() as usize;
        let loop_a = self.v(1) == self.v(self.i() + 1);
        [1, self.i() + 1].into_iter().any(|s| {
            let vs = closure_mask(g, x, self.v(s)).count_ones() as usize;
            let mut es = coord_mask(x, Coord::Edge(self.e(s).id)).count_ones() as usize;
            if loop_a {
                let other = if s == 1 { self.i() + 1 } else { 1 };
                es += coord_mask(x, Coord::Edge(self.e(other).id)).count_ones() as usize;
            }
            eta_w + vs - es >= k
        })
    }

    /// Both external tests, which must agree.
    pub fn is_external(&self, x: &Cell, k: usize) -> Result<bool, SubdivisionError> {
        let by_inflation = self.external_by_inflation(x, k);
        if by_inflation != self.external_by_counts(x, k) {
            return Err(SubdivisionError::ExternalTestsDisagree(x.key(self.g_sub())));
        }
        Ok(by_inflation)
    }

    /// External flags for every cell of a view of `DConf^k(G', n)`.
    pub fn external_mask(&self, cv: &ComplexView) -> Result<Vec<bool>, SubdivisionError> {
        let k = cv.k();
        cv.cells().par_iter().map(|c| self.is_external(c, k)).collect()
    }

    /// The subcomplex `Y`: the union of the deflations of all cells of
    /// `DConf^k(G, n)`, as a view over `G'`.
    pub fn build_y(&self, cv_g: &ComplexView) -> Result<ComplexView, SubdivisionError> {
        let cells: Vec<Cell> = cv_g
            .cells()
            .par_iter()
            .flat_map_iter(|x| self.deflate_unchecked(x))
            .collect();
        Ok(ComplexView::from_cells(
            self.g_sub_arc().clone(),
            cv_g.k(),
            cv_g.n(),
            cells,
        )?)
    }
}

/// Subdivides `edge` of `g` by a new vertex `w` and locates the context.
pub fn subdivide(g: &Arc<Graph>, edge: &str, w: &str) -> Result<SubdivisionContext, SubdivisionError> {
    let g_sub = subdivide_edge(g, edge, w)?;
    locate_h(g, &g_sub, w)
}

pub(crate) fn edge_between(g: &Graph, u: VertexId, v: VertexId, skip: &[EdgeId]) -> Option<EdgeId> {
    g.incidences(u)
        .iter()
        .copied()
        .find(|&e| !skip.contains(&e) && g.other_end(e, u) == v)
}
