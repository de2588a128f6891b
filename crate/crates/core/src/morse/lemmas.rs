//! Exhaustive checks of the combinatorial statements behind the matching,
//! run on one instance at a time.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{minimal_r, Instance, RankInfo, Role};
use crate::complex::{closure_mask, coord_mask, Cell, Coord};
use crate::graph::EdgeId;
use crate::subdivision::{HCase, SubdivisionContext};

/// How many instances of a statement were checked and how many failed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl CheckTally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(what());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    /// Each rank-`j` external cell has an entry `iota(e_j)` or `e_j`.
    pub toggle_entry: CheckTally,
    /// Ranks lie in `1..=ell`.
    pub rank_bound: CheckTally,
    /// Cycle case with `i = l - 1`: ranks are at most `l - 2`.
    pub rank_bound_cycle: CheckTally,
    /// Collapsing `e_j` to `iota(e_j)` keeps `eta(w, cl)` and the defect sets.
    pub face_stability: CheckTally,
    /// Such a face is rank-`j` external exactly when the cell is.
    pub field_well_defined: CheckTally,
    /// Every downward arrow between external cells fits one case.
    pub arrow_cases: CheckTally,
    pub arrow_case_counts: BTreeMap<String, usize>,
    /// Redundant `iota`-faces of collapsible cells keep the rank.
    pub const_rank: CheckTally,
    /// The `v_{i+1}` defect set is constant along alternating paths of rank
    /// at most `i + 1`.
    pub const_diff: CheckTally,
    /// `i + 1` is not the rank of any external cell, so the previous check
    /// has no hypothesis to test.
    pub const_diff_skipped: bool,
}

impl LemmaReport {
    pub fn all_ok(&self) -> bool {
        [
            &self.toggle_entry,
            &self.rank_bound,
            &self.rank_bound_cycle,
            &self.face_stability,
            &self.field_well_defined,
            &self.arrow_cases,
            &self.const_rank,
            &self.const_diff,
        ]
        .iter()
        .all(|t| t.ok())
    }
}

fn defect(ctx: &SubdivisionContext, x: &Cell, s: usize) -> u64 {
    closure_mask(ctx.g_sub(), x, ctx.v(s)) & !coord_mask(x, Coord::Edge(ctx.e(s).id))
}

fn classify_arrow(
    ctx: &SubdivisionContext,
    j: usize,
    q: usize,
    f: EdgeId,
    u: crate::graph::VertexId,
) -> Result<&'static str, String> {
    let (i, l) = (ctx.i(), ctx.l());
    let g2 = ctx.g_sub();
    let is_e = |s: usize| s >= 1 && s <= l && ctx.e(s).id == f;
    let is_v = |s: usize| s >= 1 && s <= l && ctx.v(s) == u;
    let vi_on_f = g2.ends(f).contains(&ctx.v(i));
    let in_h = ctx.h_position(f).is_some();
    let cycle = ctx.case() == HCase::Cycle;
    let h = j as i64 - q as i64;
    let (label, ok) = match h {
        h if h < 0 => ("A", is_e(j) && is_v(j)),
        0 if j == 1 || j == i + 1 => {
            let other = if j == 1 { i + 1 } else { 1 };
            ("B.1", u == ctx.w() && is_e(other))
        }
        0 => ("B.2", is_v(j - 1) && is_e(j - 1)),
        1 if j == i + 1 => (
            "C.1",
            u != ctx.v(i) && vi_on_f && (!in_h || (is_e(l) && i + 2 < l && cycle)),
        ),
        1 => ("C.2", is_e(j) && is_v(j)),
        _ => {
            let s = q + 1;
            let d1 = is_e(s) && is_v(s) && s != i + 1 && s < j;
            let d2 = !in_h && u != ctx.v(i) && vi_on_f && q == i && i + 2 <= j;
            let d3 = is_e(l) && j + 1 < l && u != ctx.v(i) && q == i && i + 2 <= j && cycle;
            match (d1, d2, d3) {
                (true, false, false) => ("D.1", true),
                (false, true, false) => ("D.2", true),
                (false, false, true) => ("D.3", true),
                _ => ("D", false),
            }
        }
    };
    if ok {
        Ok(label)
    } else {
        Err(format!("case {label} fails for ranks {j} -> {q}"))
    }
}

/// Runs every check on one instance. The matching must come from
/// [`build_matching`](super::build_matching) (annotations are trusted).
pub fn check_lemmas(inst: &Instance<'_>) -> LemmaReport {
    let Instance { cv, ctx, faces, matching: m } = *inst;
    let g2 = ctx.g_sub();
    let (i, l) = (ctx.i(), ctx.l());
    let mut rep = LemmaReport::default();
    let key = |idx: usize| cv.cell(idx).key(g2);
    let info = |idx: usize| -> Option<RankInfo> { m.info(idx) };
    let ranks: BTreeSet<usize> = (0..cv.len()).filter_map(|x| info(x).map(|r| r.rank)).collect();

    for x in 0..cv.len() {
        let Some(r) = info(x) else { continue };
        let cell = cv.cell(x);
        let j = r.rank;
        let iota = Coord::Vertex(ctx.iota(j));
        let ej = Coord::Edge(ctx.e(j).id);
        rep.toggle_entry
            .record(cell.coords().iter().any(|&c| c == iota || c == ej), || key(x));
        rep.rank_bound.record(
            j >= 1 && j <= ctx.ell() && minimal_r(ctx, cell) == Some(j),
            || key(x),
        );
        if ctx.case() == HCase::Cycle && i + 1 == l {
            rep.rank_bound_cycle.record(j + 2 <= l, || key(x));
        }
    }

    let hyp_const_diff = ranks.contains(&(i + 1));
    rep.const_diff_skipped = !hyp_const_diff;

    for x in 0..cv.len() {
        let cell = cv.cell(x);
        for fe in faces.faces(x) {
            let y = fe.face as usize;
            let face = cv.cell(y);
            let t = fe.coord as usize;
            let Coord::Edge(f) = cell.get(t) else { continue };
            let Coord::Vertex(u) = face.get(t) else { continue };

            // iota-type faces
            if let Some(j) = ctx.h_position(f).filter(|&j| ctx.iota(j) == u) {
                let w_same = closure_mask(g2, cell, ctx.w()).count_ones()
                    == closure_mask(g2, face, ctx.w()).count_ones();
                let sets_same = (1..=l)
                    .filter(|&s| {
                        !(ctx.case() == HCase::Cycle
                            && ((j == i && s == l) || (j == l && s == i)))
                    })
                    .all(|s| defect(ctx, cell, s) == defect(ctx, face, s));
                rep.face_stability
                    .record(w_same && sets_same, || format!("{} -> {}", key(x), key(y)));
                let rank_j = |c: usize| info(c).is_some_and(|r| r.rank == j);
                rep.field_well_defined
                    .record(rank_j(x) == rank_j(y), || format!("{} -> {}", key(x), key(y)));
            }

            // downward arrows of H_W from collapsible to redundant cells
            let (Some(rx), Some(ry)) = (info(x), info(y)) else { continue };
            if rx.role != Role::Collapsible || ry.role != Role::Redundant || m.is_pair(cv, y, x) {
                continue;
            }
            match classify_arrow(ctx, rx.rank, ry.rank, f, u) {
                Ok(label) => {
                    *rep.arrow_case_counts.entry(label.to_string()).or_default() += 1;
                    rep.arrow_cases.record(true, String::new);
                }
                Err(msg) => rep
                    .arrow_cases
                    .record(false, || format!("{} -> {}: {msg}", key(x), key(y))),
            }
            if hyp_const_diff && rx.rank <= i + 1 && ry.rank <= i + 1 {
                rep.const_diff.record(
                    defect(ctx, cell, i + 1) == defect(ctx, face, i + 1),
                    || format!("{} -> {}", key(x), key(y)),
                );
            }
        }
    }

    for (lo, hi) in m.pairs(cv) {
        let (Some(a), Some(b)) = (info(lo), info(hi)) else { continue };
        if hyp_const_diff && a.rank <= i + 1 && b.rank <= i + 1 {
            rep.const_diff.record(
                defect(ctx, cv.cell(lo), i + 1) == defect(ctx, cv.cell(hi), i + 1),
                || format!("{} / {}", key(lo), key(hi)),
            );
        }
    }

    for x in 0..cv.len() {
        let Some(rx) = info(x).filter(|r| r.role == Role::Collapsible) else { continue };
        let cell = cv.cell(x);
        for t in 0..cell.len() {
            let Coord::Edge(f) = cell.get(t) else { continue };
            let Some(s) = ctx.h_position(f).filter(|s| ranks.contains(s)) else { continue };
            let face = cell.with(t, Coord::Vertex(ctx.iota(s)));
            let Some(y) = cv.index_of(&face) else { continue };
            let Some(ry) = info(y).filter(|r| r.role == Role::Redundant) else { continue };
            let mut ok = ry.rank == rx.rank;
            if ok && !m.is_pair(cv, y, x) {
                let pair: BTreeSet<usize> = [s, rx.rank].into();
                ok = pair == BTreeSet::from([1, i + 1]);
            }
            rep.const_rank.record(ok, || format!("{} -> {}", key(x), key(y)));
        }
    }
    rep
}
