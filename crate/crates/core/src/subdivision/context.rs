use std::sync::Arc;

use serde::Serialize;

use super::{edge_between, SubdivisionError};
use crate::complex::Coord;
use crate::graph::{primitive::walk_to_primitive, EdgeId, Graph, VertexId};

/// Whether the primitive edge containing `a` joins two distinct primitive
/// vertices (a path) or one primitive vertex to itself (a cycle).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HCase {
    #[serde(rename = "A")]
    Path,
    #[serde(rename = "B")]
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedEdge {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
}

/// The labelling of the subdivided primitive edge `H'`.
///
/// `H'` is `v_i - ... - v_1 - w - v_{i+1} - ... - v_l` with `e_1 = w->v_1`,
/// `e_{i+1} = w->v_{i+1}` and `e_s = v_{s-1}->v_s` otherwise. `v_1` is the
/// endpoint of `a` with the smaller label. In the cycle case `v_i = v_l`.
/// Indices in the accessors are 1-based.
#[derive(Clone, Debug)]
pub struct SubdivisionContext {
    g: Arc<Graph>,
    g_sub: Arc<Graph>,
    w: VertexId,
    a: EdgeId,
    case: HCase,
    i: usize,
    v: Vec<VertexId>,
    e: Vec<OrientedEdge>,
    // G' edge id -> position s in e_1..e_l
    h_index: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextEdgeJson {
    pub id: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextJson {
    pub w: String,
    pub a: String,
    pub case: HCase,
    pub labels: Vec<String>,
    pub edges: Vec<ContextEdgeJson>,
    pub i: usize,
    pub l: usize,
    pub ell: usize,
}

impl SubdivisionContext {
    pub fn g(&self) -> &Graph {
        &self.g
    }

    pub fn g_arc(&self) -> &Arc<Graph> {
        &self.g
    }

    /// The subdivided graph, with ids aligned to those of `G`.
    pub fn g_sub(&self) -> &Graph {
        &self.g_sub
    }

    pub fn g_sub_arc(&self) -> &Arc<Graph> {
        &self.g_sub
    }

    pub fn w(&self) -> VertexId {
        self.w
    }

    /// The subdivided edge, as an id of `G`.
    pub fn a(&self) -> EdgeId {
        self.a
    }

    pub fn case(&self) -> HCase {
        self.case
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn l(&self) -> usize {
        self.v.len()
    }

    /// Upper bound on the rank of external cells: `l` for a path, `l - 1`
    /// for a cycle.
    pub fn ell(&self) -> usize {
        match self.case {
            HCase::Path => self.l(),
            HCase::Cycle => self.l() - 1,
        }
    }

    pub fn v(&self, s: usize) -> VertexId {
        self.v[s - 1]
    }

    pub fn e(&self, s: usize) -> OrientedEdge {
        self.e[s - 1]
    }

    /// Source of `e_s`.
    pub fn iota(&self, s: usize) -> VertexId {
        self.e[s - 1].source
    }

    /// The position `s` with `e_s = f`, if `f` is an edge of `H'`.
    pub fn h_position(&self, f: EdgeId) -> Option<usize> {
        self.h_index.get(f.index()).copied().flatten()
    }

    pub fn deflation_targets(&self) -> [Coord; 5] {
        [
            Coord::Vertex(self.v(1)),
            Coord::Vertex(self.w),
            Coord::Vertex(self.v(self.i + 1)),
            Coord::Edge(self.e(1).id),
            Coord::Edge(self.e(self.i + 1).id),
        ]
    }

    pub fn to_json_value(&self) -> ContextJson {
        let g2 = &*self.g_sub;
        let vl = |v: VertexId| g2.vertex_label(v).to_string();
        ContextJson {
            w: vl(self.w),
            a: self.g.edge_label(self.a).to_string(),
            case: self.case,
            labels: self.v.iter().map(|&v| vl(v)).collect(),
            edges: self
                .e
                .iter()
                .map(|e| ContextEdgeJson {
                    id: g2.edge_label(e.id).to_string(),
                    source: vl(e.source),
                    target: vl(e.target),
                })
                .collect(),
            i: self.i,
            l: self.l(),
            ell: self.ell(),
        }
    }
}

// Rebuilds `g_sub` so that its ids extend those of `g`, after checking that
// it is `g` with one edge `a` replaced by a path through `w`.
fn align(g: &Graph, g_sub: &Graph, w: &str) -> Result<(Graph, EdgeId), SubdivisionError> {
    let not_sub = || SubdivisionError::NotSubdivisionVertex(w.to_string());
    if g.vertex_id(w).is_some() {
        return Err(not_sub());
    }
    let ws = g_sub.vertex_id(w).ok_or_else(not_sub)?;
    if g_sub.vertex_count() != g.vertex_count() + 1
        || g_sub.edge_count() != g.edge_count() + 1
        || g_sub.degree_of(ws) != 2
        || g_sub.incidences(ws).iter().any(|&f| g_sub.edge(f).is_loop())
    {
        return Err(not_sub());
    }
    if g.vertex_ids().any(|v| g_sub.vertex_id(g.vertex_label(v)).is_none()) {
        return Err(not_sub());
    }
    let halves = [g_sub.incidences(ws)[0], g_sub.incidences(ws)[1]];
    let same_ends = |e: EdgeId, f: EdgeId| {
        let mut x: Vec<&str> = g.ends(e).iter().map(|&v| g.vertex_label(v)).collect();
        let mut y: Vec<&str> = g_sub.ends(f).iter().map(|&v| g_sub.vertex_label(v)).collect();
        x.sort();
        y.sort();
        x == y
    };
    let mut missing = None;
    for e in g.edge_ids() {
        match g_sub.edge_id(g.edge_label(e)) {
            Some(f) if !halves.contains(&f) && same_ends(e, f) => {}
            _ if missing.is_none() => missing = Some(e),
            _ => return Err(not_sub()),
        }
    }
    let a = missing.ok_or_else(not_sub)?;
    let neighbour = |f: EdgeId| g_sub.vertex_label(g_sub.other_end(f, ws)).to_string();
    let [p, q] = g.ends(a);
    let (pl, ql) = (g.vertex_label(p), g.vertex_label(q));
    let (n0, n1) = (neighbour(halves[0]), neighbour(halves[1]));
    let (first, second) = if n0 == pl && n1 == ql {
        (halves[0], halves[1])
    } else if n1 == pl && n0 == ql {
        (halves[1], halves[0])
    } else {
        return Err(not_sub());
    };
    let mut out = g.clone();
    let wid = out.push_vertex(w.to_string())?;
    out.replace_edge(a, g_sub.edge_label(first).to_string(), p, wid)?;
    out.push_edge(g_sub.edge_label(second).to_string(), wid, q)?;
    Ok((out, a))
}

/// Identifies the primitive edge of `g` containing the subdivided edge and
/// labels its subdivision in `g_sub`.
pub fn locate_h(g: &Arc<Graph>, g_sub: &Graph, w: &str) -> Result<SubdivisionContext, SubdivisionError> {
    g.ensure_connected()?;
    let (aligned, a) = align(g, g_sub, w)?;
    let wid = aligned.vertex_id(w).expect("aligned graph has w");
    let primitive = g.primitive_mask();

    let [p, q] = g.ends(a);
    let (v1, vi1) = if g.vertex_label(q) < g.vertex_label(p) { (q, p) } else { (p, q) };
    // the halves of a in G': slot a joins ends[0] to w, the appended edge w to ends[1]
    let appended = EdgeId(g.edge_count() as u32);
    let (e1_id, ei1_id) = if v1 == p { (a, appended) } else { (appended, a) };

    let (left_v, left_e) = walk_to_primitive(g, &primitive, v1, a);
    let (right_v, right_e) = walk_to_primitive(g, &primitive, vi1, a);

    let mut v = vec![v1];
    v.extend(&left_v);
    let i = v.len();
    v.push(vi1);
    v.extend(&right_v);

    let mut e = vec![OrientedEdge {
        id: e1_id,
        source: wid,
        target: v1,
    }];
    for (s, &id) in left_e.iter().enumerate() {
        e.push(OrientedEdge {
            id,
            source: v[s],
            target: v[s + 1],
        });
    }
    e.push(OrientedEdge {
        id: ei1_id,
        source: wid,
        target: vi1,
    });
    for (s, &id) in right_e.iter().enumerate() {
        e.push(OrientedEdge {
            id,
            source: v[i + s],
            target: v[i + s + 1],
        });
    }
    debug_assert_eq!(e.len(), v.len());

    let case = if v[i - 1] == *v.last().unwrap() {
        HCase::Cycle
    } else {
        HCase::Path
    };
    let mut h_index = vec![None; aligned.edge_count()];
    for (s, oe) in e.iter().enumerate() {
        h_index[oe.id.index()] = Some(s + 1);
    }
    debug_assert!(edge_between(&aligned, wid, v1, &[]).is_some());
    Ok(SubdivisionContext {
        g: g.clone(),
        g_sub: Arc::new(aligned),
        w: wid,
        a,
        case,
        i,
        v,
        e,
        h_index,
    })
}
