use std::collections::BTreeMap;

use super::{EdgeId, Graph, GraphError, VertexId};

/// The graph obtained by smoothing every degree-2 vertex, together with the
/// vertex sequence of the original graph covered by each primitive edge.
#[derive(Clone, Debug)]
pub struct PrimitiveGraph {
    pub graph: Graph,
    /// primitive edge label -> covered vertex sequence (closed for loops)
    pub covering: BTreeMap<String, Vec<String>>,
}

/// Walks from `start` away from edge `via` until a primitive vertex is
/// reached. Returns the vertices visited after `start` and the edges crossed.
pub(crate) fn walk_to_primitive(
    g: &Graph,
    primitive: &[bool],
    start: VertexId,
    via: EdgeId,
) -> (Vec<VertexId>, Vec<EdgeId>) {
    let mut verts = Vec::new();
    let mut edges = Vec::new();
    let mut cur = start;
    let mut came = via;
    while !primitive[cur.index()] {
        // degree 2: drop one incidence of `came`, follow the other
        let inc = g.incidences(cur);
        debug_assert_eq!(inc.len(), 2);
        let next_edge = if inc[0] == came { inc[1] } else { inc[0] };
        let next = g.other_end(next_edge, cur);
        edges.push(next_edge);
        verts.push(next);
        cur = next;
        came = next_edge;
    }
    (verts, edges)
}

pub fn primitive_graph(g: &Graph) -> Result<PrimitiveGraph, GraphError> {
    g.ensure_connected()?;
    let primitive = g.primitive_mask();
    let mut visited = vec![false; g.edge_count()];
    let mut edge_order: Vec<EdgeId> = g.edge_ids().collect();
    edge_order.sort_by(|&a, &b| g.edge_label(a).cmp(g.edge_label(b)));

    // (label, ordered vertex sequence) per primitive edge
    let mut prim_edges: Vec<(String, Vec<VertexId>)> = Vec::new();
    for e in edge_order {
        if visited[e.index()] {
            continue;
        }
        let [u, v] = g.ends(e);
        let (back_v, back_e) = walk_to_primitive(g, &primitive, u, e);
        // a loop at a primitive vertex walks nowhere on either side
        let (fwd_v, fwd_e) = walk_to_primitive(g, &primitive, v, e);
        let mut seq: Vec<VertexId> = back_v.iter().rev().copied().collect();
        seq.push(u);
        seq.push(v);
        seq.extend(fwd_v.iter().copied());
        let mut covered = vec![e];
        covered.extend(back_e);
        covered.extend(fwd_e);
        for c in &covered {
            visited[c.index()] = true;
        }
        let label = covered
            .iter()
            .map(|&c| g.edge_label(c))
            .min()
            .unwrap()
            .to_string();
        let as_labels = |s: &[VertexId]| s.iter().map(|&x| g.vertex_label(x)).collect::<Vec<_>>();
        let rev: Vec<VertexId> = seq.iter().rev().copied().collect();
        if as_labels(&rev) < as_labels(&seq) {
            seq = rev;
        }
        prim_edges.push((label, seq));
    }

    let mut verts: Vec<String> = g
        .vertex_ids()
        .filter(|v| primitive[v.index()])
        .map(|v| g.vertex_label(v).to_string())
        .collect();
    verts.sort();
    let mut edges = Vec::new();
    let mut covering = BTreeMap::new();
    for (label, seq) in prim_edges {
        let first = g.vertex_label(seq[0]).to_string();
        let last = g.vertex_label(*seq.last().unwrap()).to_string();
        edges.push((label.clone(), first, last));
        covering.insert(
            label,
            seq.iter().map(|&x| g.vertex_label(x).to_string()).collect(),
        );
    }
    edges.sort();
    let graph = Graph::new(verts, edges)?;
    Ok(PrimitiveGraph { graph, covering })
}
