//! Deliberate corruptions of a matching, used to show that the verifiers
//! notice a single broken pair.

use serde::Serialize;

use super::MatchingRecord;
use crate::complex::{ComplexView, FaceTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultKind {
    /// Exchange the partners of two pairs in the same dimension, preferring
    /// pairs whose collapsible cells share a face.
    SwapPartners,
    /// Re-pair a redundant cell with a different coface, unpairing whatever
    /// that coface and the old partner were matched with.
    RepairToOtherCoface,
    /// Unpair one matched pair.
    DropPair,
}

impl FaultKind {
    pub const ALL: [FaultKind; 3] = [
        FaultKind::SwapPartners,
        FaultKind::RepairToOtherCoface,
        FaultKind::DropPair,
    ];
}

fn unset(m: &mut MatchingRecord, i: usize) {
    if let Some(p) = m.mate(i) {
        m.mate[p] = None;
    }
    m.mate[i] = None;
}

fn link(m: &mut MatchingRecord, a: usize, b: usize) {
    unset(m, a);
    unset(m, b);
    m.mate[a] = Some(b as u32);
    m.mate[b] = Some(a as u32);
}

/// Returns a copy of `m` with one pair corrupted, starting the search at pair
/// number `which` (taken modulo the number of pairs). `None` when the
/// matching has no pair the fault applies to.
pub fn inject_fault(
    cv: &ComplexView,
    faces: &FaceTable,
    m: &MatchingRecord,
    kind: FaultKind,
    which: usize,
) -> Option<MatchingRecord> {
    let pairs = m.pairs(cv);
    if pairs.is_empty() {
        return None;
    }
    let rot = which % pairs.len();
    let order = || pairs[rot..].iter().chain(&pairs[..rot]).copied();
    let mut out = m.clone();
    match kind {
        FaultKind::DropPair => {
            let (y, _) = pairs[rot];
            unset(&mut out, y);
        }
        FaultKind::SwapPartners => {
            let (y1, x1) = pairs[rot];
            let same_dim: Vec<(usize, usize)> = order()
                .filter(|&(y, _)| y != y1 && cv.dim_of(y) == cv.dim_of(y1))
                .collect();
            let shares_face = |x2: usize| {
                faces
                    .faces(x2)
                    .iter()
                    .any(|f| faces.faces(x1).iter().any(|g| g.face == f.face))
            };
            let &(y2, x2) = same_dim
                .iter()
                .find(|&&(_, x2)| shares_face(x2))
                .or(same_dim.first())?;
            out.mate[y1] = Some(x2 as u32);
            out.mate[x2] = Some(y1 as u32);
            out.mate[y2] = Some(x1 as u32);
            out.mate[x1] = Some(y2 as u32);
        }
        FaultKind::RepairToOtherCoface => {
            let (y, x) = order().find_map(|(y, x)| {
                let other = cv
                    .dim_range(cv.dim_of(x))
                    .find(|&c| c != x && faces.faces(c).iter().any(|f| f.face as usize == y))?;
                Some((y, other))
            })?;
            link(&mut out, y, x);
        }
    }
    Some(out)
}
