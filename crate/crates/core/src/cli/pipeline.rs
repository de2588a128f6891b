use std::sync::Arc;

use serde::Serialize;

use super::{CliError, Outcome, RunConfig};
use crate::complex::enumerate_dconf;
use crate::graph::check_sufficiently_subdivided;
use crate::homology::{betti_numbers, Betti};
use crate::morse::{
    check_lemmas, check_pairs, critical_mismatch, morse_betti, pair_external_cells, verify_acyclic,
    verify_critical_subcomplex, AcyclicityReport, Instance, LemmaReport, PairReport,
};
use crate::subdivision::{fresh_vertex_label, subdivide, ContextJson};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiComparison {
    /// `DConf^k(G, n)`.
    pub graph: Betti,
    /// `DConf^k(G', n)`.
    pub subdivided: Betti,
    pub y: Betti,
    /// From the Morse complex; absent when the matching is cyclic.
    pub morse: Option<Betti>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub graph_hash: String,
    pub k: usize,
    pub n: usize,
    pub field: &'static str,
    pub edge: String,
    pub w: String,
    pub context: ContextJson,
    /// Cells of `DConf^k(G', n)`.
    pub cells: usize,
    pub cells_by_dim: Vec<usize>,
    /// Cells of `DConf^k(G, n)`.
    pub base_cells: usize,
    #[serde(rename = "Y")]
    pub y: usize,
    pub y_by_dim: Vec<usize>,
    pub external: usize,
    pub pairs: usize,
    pub critical: usize,
    pub critical_by_dim: Vec<usize>,
    pub pair_check: PairReport,
    pub critical_closed: bool,
    pub acyclic: bool,
    pub acyclicity: AcyclicityReport,
    #[serde(rename = "critical_equals_Y")]
    pub critical_equals_y: bool,
    pub critical_mismatch: Option<String>,
    pub betti: BettiComparison,
    pub betti_equal: bool,
    pub lemma_checks: LemmaReport,
    pub ok: bool,
}

impl PipelineReport {
    pub fn summary(&self) -> String {
        let fmt = |b: &Betti| {
            let v: Vec<String> = b.trimmed().iter().map(usize::to_string).collect();
            format!("({})", v.join(","))
        };
        format!(
            "subdivided {} at {}: {} cells, Y {}, {} external, {} pairs, {}, betti {} over {} {}: {}",
            self.edge,
            self.w,
            self.cells,
            self.y,
            self.external,
            self.pairs,
            if self.acyclic { "acyclic" } else { "CYCLIC" },
            fmt(&self.betti.subdivided),
            self.field,
            if self.betti_equal { "invariant" } else { "CHANGED" },
            if self.ok { "ok" } else { "FAILED" },
        )
    }
}

/// Subdivides one edge of a sufficiently subdivided graph and verifies the
/// matching, the critical cells and the homology comparison.
pub fn cmd_pipeline(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let g = Arc::new(cfg.load_graph()?);
    let (k, n) = (cfg.k, cfg.n);
    let report = check_sufficiently_subdivided(&g, k, n)?;
    if !report.ok {
        return Err(CliError::Insufficient { k, n, report });
    }
    let edge = match &cfg.edge {
        Some(e) => e.clone(),
        None => g
            .edge_ids()
            .map(|e| g.edge_label(e))
            .min()
            .ok_or_else(|| CliError::Parse("graph has no edges to subdivide".into()))?
            .to_string(),
    };
    let w = fresh_vertex_label(&g);
    let ctx = subdivide(&g, &edge, &w)?;

    let cv_g = enumerate_dconf(g.clone(), k, n, cfg.budget)?;
    let cv = enumerate_dconf(ctx.g_sub_arc().clone(), k, n, cfg.budget)?;
    let y = ctx.build_y(&cv_g)?;
    let faces = cv.face_table()?;
    let m = pair_external_cells(&cv, &ctx)?;

    let pair_check = check_pairs(&cv, &ctx, &m);
    let critical_closed = verify_critical_subcomplex(&cv, &faces, &m);
    let acyclicity = verify_acyclic(&cv, &faces, &m);
    let mismatch = critical_mismatch(&cv, &m, &y);
    let lemma_checks = check_lemmas(&Instance {
        cv: &cv,
        ctx: &ctx,
        faces: &faces,
        matching: &m,
    });

    let field = cfg.field;
    let betti = BettiComparison {
        graph: betti_numbers(&cv_g, field)?.betti,
        subdivided: betti_numbers(&cv, field)?.betti,
        y: betti_numbers(&y, field)?.betti,
        morse: if acyclicity.acyclic {
            Some(morse_betti(&cv, &faces, &m, field)?)
        } else {
            None
        },
    };
    let betti_equal = betti.graph == betti.subdivided
        && betti.y == betti.subdivided
        && betti.morse.as_ref() == Some(&betti.subdivided);

    let mut critical_by_dim = m.critical_counts(&cv);
    critical_by_dim.truncate(cv.counts().len());
    let critical_equals_y = mismatch.is_none();
    let ok = pair_check.ok
        && critical_closed
        && acyclicity.acyclic
        && critical_equals_y
        && betti_equal
        && lemma_checks.all_ok();
    let rep = PipelineReport {
        graph_hash: g.content_hash(),
        k,
        n,
        field: field.name(),
        edge,
        w,
        context: ctx.to_json_value(),
        cells: cv.len(),
        cells_by_dim: cv.counts(),
        base_cells: cv_g.len(),
        y: y.len(),
        y_by_dim: y.counts(),
        external: m.external_count(),
        pairs: pair_check.pairs,
        critical: m.critical().len(),
        critical_by_dim,
        pair_check,
        critical_closed,
        acyclic: acyclicity.acyclic,
        acyclicity,
        critical_equals_y,
        critical_mismatch: mismatch,
        betti,
        betti_equal,
        lemma_checks,
        ok,
    };
    let mut outcome = Outcome::new(&rep, rep.summary(), ok);
    if let Some(out) = &cfg.out {
        let mut lines = Vec::new();
        m.write_jsonl(&cv, &mut lines).expect("writing to memory");
        outcome.attachments.push((out.with_extension("matching.jsonl"), lines));
    }
    Ok(outcome)
}
