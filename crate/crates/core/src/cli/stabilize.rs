use std::sync::Arc;

use serde::Serialize;

use super::{CliError, Outcome, RunConfig};
use crate::complex::enumerate_dconf;
use crate::graph::{check_sufficiently_subdivided, Graph};
use crate::homology::{betti_numbers, Betti};
use crate::subdivision::{fresh_vertex_label, subdivide_edge, SubdivisionError};

/// One barycentric subdivision: a midpoint on every edge, inserted one edge
/// at a time in label order.
pub fn barycentric(g: &Graph) -> Result<Graph, SubdivisionError> {
    let mut labels: Vec<String> = g.edge_ids().map(|e| g.edge_label(e).to_string()).collect();
    labels.sort();
    let mut cur = g.clone();
    for e in labels {
        let w = fresh_vertex_label(&cur);
        cur = subdivide_edge(&cur, &e, &w)?;
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizeRow {
    pub j: usize,
    pub vertices: usize,
    pub edges: usize,
    pub sufficient: bool,
    pub cells: usize,
    pub cells_by_dim: Vec<usize>,
    pub betti: Betti,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizeReport {
    pub graph_hash: String,
    pub k: usize,
    pub n: usize,
    pub field: &'static str,
    pub rows: Vec<StabilizeRow>,
    pub first_sufficient: Option<usize>,
    /// Betti numbers agree on every level from `first_sufficient` on.
    pub constant_from_first_sufficient: bool,
    pub ok: bool,
}

/// Rows for `B_0 = G, B_1, ..., B_levels`.
pub fn stabilization_rows(g: &Graph, cfg: &RunConfig) -> Result<Vec<StabilizeRow>, CliError> {
    let mut rows = Vec::with_capacity(cfg.levels + 1);
    let mut cur = g.clone();
    for j in 0..=cfg.levels {
        if j > 0 {
            cur = barycentric(&cur)?;
        }
        let sufficient = check_sufficiently_subdivided(&cur, cfg.k, cfg.n)?.ok;
        let cv = enumerate_dconf(Arc::new(cur.clone()), cfg.k, cfg.n, cfg.budget)?;
        rows.push(StabilizeRow {
            j,
            vertices: cur.vertex_count(),
            edges: cur.edge_count(),
            sufficient,
            cells: cv.len(),
            cells_by_dim: cv.counts(),
            betti: betti_numbers(&cv, cfg.field)?.betti,
        });
    }
    Ok(rows)
}

/// Betti numbers of `DConf^k(B_j, n)` for `j = 0..=levels`, flagging the
/// first sufficiently subdivided level and checking constancy from there.
pub fn cmd_stabilize(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let g = cfg.load_graph()?;
    let rows = stabilization_rows(&g, cfg)?;
    let first_sufficient = rows.iter().find(|r| r.sufficient).map(|r| r.j);
    let constant = first_sufficient.is_some_and(|j0| rows[j0..].iter().all(|r| r.betti == rows[j0].betti));
    let ok = constant;
    let summary = match first_sufficient {
        Some(j0) => format!(
            "sufficient from B_{j0}; betti {:?} {} through B_{}",
            rows[j0].betti.trimmed(),
            if constant { "constant" } else { "NOT constant" },
            cfg.levels
        ),
        None => format!("no level up to B_{} is sufficiently subdivided", cfg.levels),
    };
    let rep = StabilizeReport {
        graph_hash: g.content_hash(),
        k: cfg.k,
        n: cfg.n,
        field: cfg.field.name(),
        rows,
        first_sufficient,
        constant_from_first_sufficient: constant,
        ok,
    };
    Ok(Outcome::new(&rep, summary, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, path, star};

    #[test]
    fn barycentric_doubles_edges() {
        let g = barycentric(&cycle(3)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 6));
        assert!(g.is_cycle());
        let s = barycentric(&barycentric(&star(3)).unwrap()).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count()), (13, 12));
        assert_eq!(s.essential_vertices().len(), 4);
    }

    #[test]
    fn single_edge_rows() {
        let cfg = RunConfig {
            levels: 2,
            ..RunConfig::new("unused", 3, 3)
        };
        let rows = stabilization_rows(&path(&["a", "b"]), &cfg).unwrap();
        assert!(rows.iter().all(|r| r.sufficient));
        for r in &rows {
            assert_eq!(r.betti, Betti(vec![1, 1]), "B_{}", r.j);
        }
    }
}
