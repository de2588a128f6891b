//! The discrete gradient field on `DConf^k(G', n)` collapsing it onto `Y`.
//!
//! Every external cell `x` has a rank `j`, the least `s` such that each entry
//! whose closure meets `v_s` is `e_s`. The cell is paired by toggling its
//! last entry in `{iota(e_j), e_j}`. Non-external cells stay critical.
//! Everything here is verified instance by instance.

mod acyclic;
mod fault;
mod lemmas;
mod morse_complex;

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{closure_mask, coord_mask, enumerate_dconf, Cell, ComplexError, ComplexView, Coord, FaceTable};
use crate::graph::{check_sufficiently_subdivided, Graph, GraphError, SubdivReport};
use crate::subdivision::{SubdivisionContext, SubdivisionError};

pub use acyclic::{verify_acyclic, verify_critical_subcomplex, AcyclicityReport};
pub use fault::{inject_fault, FaultKind};
pub use lemmas::{check_lemmas, CheckTally, LemmaReport};
pub use morse_complex::{morse_betti, morse_boundaries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorseError {
    #[error("graph is not ({k},{n})-sufficiently subdivided: {} violation(s)", report.violations.len())]
    Insufficient { k: usize, n: usize, report: SubdivReport },
    #[error("property index {s} outside 1..={l}")]
    IndexOutOfRange { s: usize, l: usize },
    #[error("{0} is not external")]
    NotExternal(String),
    #[error("no s <= ell with property R(s) for {0}")]
    RankUndefined(String),
    #[error("rank-{rank} cell {cell} has no entry iota(e_j) or e_j")]
    MissingToggle { cell: String, rank: usize },
    #[error("partner of {0} is not a cell of the complex")]
    PartnerMissing(String),
    #[error("pairing is not an involution at {0}")]
    NotInvolution(String),
    #[error("critical cells differ from Y at {0}")]
    CriticalMismatch(String),
    #[error("complex is not built on the subdivided graph")]
    GraphMismatch,
    #[error("modified Hasse diagram has a cycle through {0}")]
    Cyclic(String),
    #[error("Morse boundary coefficient overflow")]
    CoefficientOverflow,
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Redundant,
    Collapsible,
}

/// Rank, toggle position `t` (1-based) and role of an external cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RankInfo {
    pub rank: usize,
    pub t: usize,
    pub role: Role,
}

// coordinates meeting v_s other than the e_s entries
fn defect_mask(ctx: &SubdivisionContext, x: &Cell, s: usize) -> u64 {
    closure_mask(ctx.g_sub(), x, ctx.v(s)) & !coord_mask(x, Coord::Edge(ctx.e(s).id))
}

/// `R(s)`: every entry whose closure meets `v_s` is `e_s`.
pub fn has_property_r(ctx: &SubdivisionContext, x: &Cell, s: usize) -> Result<bool, MorseError> {
    if s == 0 || s > ctx.l() {
        return Err(MorseError::IndexOutOfRange { s, l: ctx.l() });
    }
    Ok(defect_mask(ctx, x, s) == 0)
}

/// Least `s` with `R(s)`, if any.
pub fn minimal_r(ctx: &SubdivisionContext, x: &Cell) -> Option<usize> {
    (1..=ctx.l()).find(|&s| defect_mask(ctx, x, s) == 0)
}

// rank info without the externality check
fn rank_unchecked(ctx: &SubdivisionContext, x: &Cell) -> Result<RankInfo, MorseError> {
    let key = || x.key(ctx.g_sub());
    let j = minimal_r(ctx, x)
        .filter(|&j| j <= ctx.ell())
        .ok_or_else(|| MorseError::RankUndefined(key()))?;
    let iota = Coord::Vertex(ctx.iota(j));
    let ej = Coord::Edge(ctx.e(j).id);
    let t = (0..x.len())
        .rev()
        .find(|&t| x.get(t) == iota || x.get(t) == ej)
        .ok_or_else(|| MorseError::MissingToggle { cell: key(), rank: j })?;
    let role = if x.get(t) == ej {
        Role::Collapsible
    } else {
        Role::Redundant
    };
    Ok(RankInfo { rank: j, t: t + 1, role })
}

/// Rank, toggle position and role of an external cell.
pub fn rank(ctx: &SubdivisionContext, x: &Cell, k: usize) -> Result<RankInfo, MorseError> {
    if !ctx.is_external(x, k)? {
        return Err(MorseError::NotExternal(x.key(ctx.g_sub())));
    }
    rank_unchecked(ctx, x)
}

fn toggle(ctx: &SubdivisionContext, x: &Cell, info: RankInfo) -> Cell {
    let c = match info.role {
        Role::Redundant => Coord::Edge(ctx.e(info.rank).id),
        Role::Collapsible => Coord::Vertex(ctx.iota(info.rank)),
    };
    x.with(info.t - 1, c)
}

/// The cell matched with an external cell.
pub fn partner(ctx: &SubdivisionContext, x: &Cell, k: usize) -> Result<Cell, MorseError> {
    let info = rank(ctx, x, k)?;
    Ok(toggle(ctx, x, info))
}

/// The matching on a view of `DConf^k(G', n)`, indexed like the view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingRecord {
    pub(crate) mate: Vec<Option<u32>>,
    pub(crate) info: Vec<Option<RankInfo>>,
}

impl MatchingRecord {
    /// No pairs; every cell critical.
    pub fn empty(len: usize) -> Self {
        MatchingRecord {
            mate: vec![None; len],
            info: vec![None; len],
        }
    }

    pub fn len(&self) -> usize {
        self.mate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mate.is_empty()
    }

    pub fn mate(&self, i: usize) -> Option<usize> {
        self.mate[i].map(|m| m as usize)
    }

    pub fn info(&self, i: usize) -> Option<RankInfo> {
        self.info[i]
    }

    pub fn is_external(&self, i: usize) -> bool {
        self.info[i].is_some()
    }

    pub fn is_critical(&self, i: usize) -> bool {
        self.mate[i].is_none()
    }

    /// Whether `lo` and `hi` are mutually matched with `lo` one dimension
    /// below `hi`.
    pub fn is_pair(&self, cv: &ComplexView, lo: usize, hi: usize) -> bool {
        self.mate(lo) == Some(hi) && self.mate(hi) == Some(lo) && cv.dim_of(lo) + 1 == cv.dim_of(hi)
    }

    /// `(redundant, collapsible)` index pairs, ordered by the redundant cell.
    pub fn pairs(&self, cv: &ComplexView) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter_map(|i| self.mate(i).map(|m| (i, m)))
            .filter(|&(i, m)| self.is_pair(cv, i, m))
            .collect()
    }

    pub fn critical(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_critical(i)).collect()
    }

    pub fn external_count(&self) -> usize {
        self.info.iter().filter(|i| i.is_some()).count()
    }

    /// Critical cell counts by dimension.
    pub fn critical_counts(&self, cv: &ComplexView) -> Vec<usize> {
        let mut out = vec![0; cv.n() + 1];
        for i in self.critical() {
            out[cv.dim_of(i)] += 1;
        }
        out
    }

    /// One JSON object per cell: `{cell, rank, t, role, partner}`, with
    /// `role: "critical"` and nulls for unpaired cells.
    pub fn write_jsonl<W: Write>(&self, cv: &ComplexView, mut w: W) -> io::Result<()> {
        let g = cv.graph();
        for i in 0..self.len() {
            let info = self.info[i];
            let row = serde_json::json!({
                "cell": cv.cell(i).key(g),
                "rank": info.map(|r| r.rank),
                "t": info.map(|r| r.t),
                "role": match (self.mate(i), info) {
                    (Some(_), Some(r)) => serde_json::to_value(r.role).unwrap(),
                    _ => serde_json::Value::from("critical"),
                },
                "partner": self.mate(i).map(|m| cv.cell(m).key(g)),
            });
            writeln!(w, "{row}")?;
        }
        Ok(())
    }
}

fn same_graph(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && a.vertex_ids().all(|v| a.vertex_label(v) == b.vertex_label(v))
        && a.edge_ids().all(|e| a.edge(e) == b.edge(e))
}

/// Pairs every external cell of `cv` with its partner. Unpaired cells are
/// not compared with `Y`; see [`build_matching`] for that.
///
/// Refuses graphs `G` that are not `(k, n)`-sufficiently subdivided, where
/// the rank need not exist.
pub fn pair_external_cells(cv: &ComplexView, ctx: &SubdivisionContext) -> Result<MatchingRecord, MorseError> {
    if !same_graph(cv.graph(), ctx.g_sub()) {
        return Err(MorseError::GraphMismatch);
    }
    let (k, n) = (cv.k(), cv.n());
    let report = check_sufficiently_subdivided(ctx.g(), k, n)?;
    if !report.ok {
        return Err(MorseError::Insufficient { k, n, report });
    }
    let g2 = ctx.g_sub();
    let external = ctx.external_mask(cv)?;
    let annotated: Vec<Option<(RankInfo, u32)>> = cv
        .cells()
        .par_iter()
        .zip(external.par_iter())
        .map(|(x, &ext)| {
            if !ext {
                return Ok(None);
            }
            let info = rank_unchecked(ctx, x)?;
            let p = toggle(ctx, x, info);
            let idx = cv
                .index_of(&p)
                .ok_or_else(|| MorseError::PartnerMissing(x.key(g2)))?;
            Ok(Some((info, idx as u32)))
        })
        .collect::<Result<_, MorseError>>()?;
    let mut m = MatchingRecord::empty(cv.len());
    for (i, a) in annotated.iter().enumerate() {
        if let Some((info, p)) = a {
            m.info[i] = Some(*info);
            m.mate[i] = Some(*p);
        }
    }
    for i in 0..m.len() {
        if let Some(p) = m.mate(i) {
            if m.mate(p) != Some(i) {
                return Err(MorseError::NotInvolution(cv.cell(i).key(g2)));
            }
        }
    }
    Ok(m)
}

/// The first cell (as a key) on which the critical cells of `m` and the
/// cells of `y` disagree, or `None` when the two sets are equal.
pub fn critical_mismatch(cv: &ComplexView, m: &MatchingRecord, y: &ComplexView) -> Option<String> {
    let g = cv.graph();
    for c in y.cells() {
        match cv.index_of(c) {
            Some(i) if m.is_critical(i) => {}
            _ => return Some(c.key(g)),
        }
    }
    (0..m.len())
        .find(|&i| m.is_critical(i) && !y.contains(cv.cell(i)))
        .map(|i| cv.cell(i).key(g))
}

/// [`pair_external_cells`], then checks that the unpaired cells are exactly
/// the cells of `Y`.
pub fn build_matching(cv: &ComplexView, ctx: &SubdivisionContext) -> Result<MatchingRecord, MorseError> {
    let m = pair_external_cells(cv, ctx)?;
    let cv_g = enumerate_dconf(ctx.g_arc().clone(), cv.k(), cv.n(), cv.len().max(1))?;
    let y = ctx.build_y(&cv_g)?;
    match critical_mismatch(cv, &m, &y) {
        Some(key) => Err(MorseError::CriticalMismatch(key)),
        None => Ok(m),
    }
}

/// Outcome of the pair-coherence check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub ok: bool,
    pub pairs: usize,
    pub violations: Vec<String>,
}

/// Structural checks on a matching: mutual and dimension-adjacent partners,
/// each pair toggling `iota(e_j)` to `e_j` at the shared position `t`,
/// shared rank and `t`, and every external cell paired.
pub fn check_pairs(cv: &ComplexView, ctx: &SubdivisionContext, m: &MatchingRecord) -> PairReport {
    let g2 = ctx.g_sub();
    let mut violations = Vec::new();
    let mut pairs = 0;
    for i in 0..m.len() {
        let key = || cv.cell(i).key(g2);
        let Some(p) = m.mate(i) else {
            if m.is_external(i) {
                violations.push(format!("external cell {} is unpaired", key()));
            }
            continue;
        };
        if m.mate(p) != Some(i) {
            violations.push(format!("{} is not its partner's partner", key()));
            continue;
        }
        let (lo, hi) = match cv.dim_of(p).cmp(&cv.dim_of(i)) {
            std::cmp::Ordering::Greater if cv.dim_of(p) == cv.dim_of(i) + 1 => (i, p),
            std::cmp::Ordering::Less if cv.dim_of(i) == cv.dim_of(p) + 1 => continue,
            _ => {
                violations.push(format!("{} is paired outside adjacent dimensions", key()));
                continue;
            }
        };
        pairs += 1;
        let (Some(a), Some(b)) = (m.info(lo), m.info(hi)) else {
            violations.push(format!("pair at {} has a non-external cell", key()));
            continue;
        };
        if a.rank != b.rank || a.t != b.t {
            violations.push(format!("pair at {} disagrees on rank or t", key()));
            continue;
        }
        if a.role != Role::Redundant || b.role != Role::Collapsible {
            violations.push(format!("pair at {} has wrong roles", key()));
            continue;
        }
        let (x, y) = (cv.cell(lo), cv.cell(hi));
        let t = a.t - 1;
        let diff = (0..x.len()).filter(|&s| x.get(s) != y.get(s)).count();
        if diff != 1
            || x.get(t) != Coord::Vertex(ctx.iota(a.rank))
            || y.get(t) != Coord::Edge(ctx.e(a.rank).id)
        {
            violations.push(format!(
                "pair {} / {} is not the toggle at position {}",
                x.key(g2),
                y.key(g2),
                a.t
            ));
        }
    }
    PairReport {
        ok: violations.is_empty(),
        pairs,
        violations,
    }
}

/// Everything the verifiers need about one instance.
pub struct Instance<'a> {
    pub cv: &'a ComplexView,
    pub ctx: &'a SubdivisionContext,
    pub faces: &'a FaceTable,
    pub matching: &'a MatchingRecord,
}
