use std::collections::BTreeSet;

use serde::Serialize;

use super::{EdgeId, Graph, GraphError, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    Path,
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Vertex sequence of a shortest offending path or cycle; cycles repeat
    /// their first vertex at the end.
    pub witness: Vec<String>,
    pub touched: usize,
    pub required: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdivReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

fn trace_back(g: &Graph, via: &[Option<EdgeId>], src: VertexId, dst: VertexId) -> Vec<VertexId> {
    let mut seq = vec![dst];
    let mut cur = dst;
    while cur != src {
        let e = via[cur.index()].expect("reachable vertex has a parent edge");
        cur = g.other_end(e, cur);
        seq.push(cur);
    }
    seq.reverse();
    seq
}

/// Checks that every path between distinct essential vertices touches at
/// least `n - k + 2` vertices and every cycle touches at least `n - k + 3`.
///
/// Only simple paths and cycles matter, so this reduces to shortest-path
/// distances between essential vertices and shortest cycles through each
/// edge (a loop is a cycle touching one vertex, a parallel pair one touching
/// two). Each violation carries a shortest witness.
pub fn check_sufficiently_subdivided(g: &Graph, k: usize, n: usize) -> Result<SubdivReport, GraphError> {
    if k < 2 || k > n {
        return Err(GraphError::InvalidParameters { k, n });
    }
    g.ensure_connected()?;
    let path_min = n - k + 2;
    let cycle_min = n - k + 3;
    let label = |v: VertexId| g.vertex_label(v).to_string();
    let mut violations = Vec::new();

    let mut essential = g.essential_vertices();
    essential.sort_by(|&a, &b| g.vertex_label(a).cmp(g.vertex_label(b)));
    for (idx, &u) in essential.iter().enumerate() {
        let (dist, via) = g.bfs(u, None);
        for &v in &essential[idx + 1..] {
            let d = dist[v.index()].expect("connected graph");
            if d + 1 < path_min {
                violations.push(Violation {
                    kind: ViolationKind::Path,
                    witness: trace_back(g, &via, u, v).into_iter().map(label).collect(),
                    touched: d + 1,
                    required: path_min,
                });
            }
        }
    }

    let mut edges: Vec<EdgeId> = g.edge_ids().collect();
    edges.sort_by(|&a, &b| g.edge_label(a).cmp(g.edge_label(b)));
    let mut seen_cycles: BTreeSet<Vec<EdgeId>> = BTreeSet::new();
    for e in edges {
        let [u, v] = g.ends(e);
        let (seq, cycle_edges) = if u == v {
            (vec![u, u], vec![e])
        } else {
            let (dist, via) = g.bfs(u, Some(e));
            if dist[v.index()].is_none() {
                continue; // bridge
            }
            let mut seq = trace_back(g, &via, u, v);
            let mut cycle_edges = vec![e];
            for w in seq.windows(2) {
                cycle_edges.push(via[w[1].index()].unwrap());
            }
            seq.push(u);
            (seq, cycle_edges)
        };
        let touched = seq.len() - 1;
        if touched >= cycle_min {
            continue;
        }
        let mut key = cycle_edges;
        key.sort();
        if seen_cycles.insert(key) {
            violations.push(Violation {
                kind: ViolationKind::Cycle,
                witness: seq.into_iter().map(label).collect(),
                touched,
                required: cycle_min,
            });
        }
    }

    Ok(SubdivReport {
        ok: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, path, star, theta};

    fn figure_graph() -> Graph {
        Graph::from_edges(
            &["a", "b", "c"],
            &[("ab", "a", "b"), ("bc1", "b", "c"), ("bc2", "b", "c")],
        )
        .unwrap()
    }

    #[test]
    fn figure_graph_needs_three_more_vertices() {
        let n = 5;
        let r = check_sufficiently_subdivided(&figure_graph(), n - 1, n).unwrap();
        assert!(!r.ok);
        assert_eq!(r.violations.len(), 2);
        assert_eq!(r.violations[0].kind, ViolationKind::Path);
        assert_eq!(r.violations[0].witness, vec!["a", "b"]);
        assert_eq!(r.violations[1].kind, ViolationKind::Cycle);
        assert_eq!(r.violations[1].touched, 2);
        assert_eq!(r.violations[1].required, 4);

        // one vertex on ab, two on the double edge
        let fixed = Graph::from_edges(
            &["a", "b", "c", "m", "x", "y"],
            &[
                ("am", "a", "m"),
                ("mb", "m", "b"),
                ("bx", "b", "x"),
                ("xc", "x", "c"),
                ("by", "b", "y"),
                ("yc", "y", "c"),
            ],
        )
        .unwrap();
        assert!(check_sufficiently_subdivided(&fixed, n - 1, n).unwrap().ok);
    }

    #[test]
    fn simple_graphs_are_sufficient_when_k_equals_n() {
        for g in [path(&["a", "b"]), cycle(3), star(3), theta(&[2, 2, 3])] {
            for n in 2..5 {
                assert!(check_sufficiently_subdivided(&g, n, n).unwrap().ok);
            }
        }
    }

    #[test]
    fn loops_fail_when_n_at_least_k() {
        let g = Graph::from_edges(&["u", "v"], &[("uv", "u", "v"), ("l", "u", "u")]).unwrap();
        let r = check_sufficiently_subdivided(&g, 2, 2).unwrap();
        assert!(!r.ok);
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::Cycle && v.touched == 1));
    }

    #[test]
    fn star_needs_long_legs() {
        assert!(!check_sufficiently_subdivided(&star(3), 2, 3).unwrap().ok);
        assert!(check_sufficiently_subdivided(&cycle(4), 2, 3).unwrap().ok);
        assert!(!check_sufficiently_subdivided(&cycle(3), 2, 3).unwrap().ok);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            check_sufficiently_subdivided(&cycle(3), 3, 2),
            Err(GraphError::InvalidParameters { .. })
        ));
        assert!(check_sufficiently_subdivided(&cycle(3), 1, 2).is_err());
    }
}
