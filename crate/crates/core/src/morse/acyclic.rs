//! Acyclicity of the modified Hasse diagram `H_W`: face arrows point down,
//! except that each matched pair points up.

use std::collections::VecDeque;

use serde::Serialize;

use super::MatchingRecord;
use crate::complex::{ComplexView, FaceTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityReport {
    /// Both checkers found no cycle.
    pub acyclic: bool,
    /// No closed alternating path `y0 -> x0 -> y1 -> ... -> y0`.
    pub alternating_ok: bool,
    /// A topological order of all of `H_W` exists.
    pub topological_ok: bool,
    /// Cell keys along a directed cycle, when one was found.
    pub witness: Option<Vec<String>>,
}

// the redundant cell y paired upward, if any
fn up_mate(cv: &ComplexView, m: &MatchingRecord, y: usize) -> Option<usize> {
    m.mate(y).filter(|&x| m.is_pair(cv, y, x))
}

/// Depth-first search for closed V-paths. Nodes are redundant cells; `y`
/// leads to every redundant face `z != y` of its partner. Returns a cycle as
/// alternating cell indices `y0, x0, y1, x1, ...`.
fn alternating_cycle(cv: &ComplexView, faces: &FaceTable, m: &MatchingRecord) -> Option<Vec<usize>> {
    const WHITE: u8 = 0;
    const GREY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color = vec![WHITE; cv.len()];
    let succ = |y: usize| -> Vec<usize> {
        let Some(x) = up_mate(cv, m, y) else {
            return Vec::new();
        };
        faces
            .faces(x)
            .iter()
            .map(|f| f.face as usize)
            .filter(|&z| z != y && up_mate(cv, m, z).is_some())
            .collect()
    };
    for root in 0..cv.len() {
        if color[root] != WHITE || up_mate(cv, m, root).is_none() {
            continue;
        }
        // (node, successors, next successor position)
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root), 0)];
        color[root] = GREY;
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let z = top.1[top.2];
                top.2 += 1;
                match color[z] {
                    WHITE => {
                        color[z] = GREY;
                        let s = succ(z);
                        stack.push((z, s, 0));
                    }
                    GREY => {
                        let start = stack.iter().position(|f| f.0 == z).unwrap();
                        let mut cyc = Vec::new();
                        for frame in &stack[start..] {
                            cyc.push(frame.0);
                            cyc.push(up_mate(cv, m, frame.0).unwrap());
                        }
                        cyc.push(z);
                        return Some(cyc);
                    }
                    _ => {}
                }
            } else {
                color[top.0] = BLACK;
                stack.pop();
            }
        }
    }
    None
}

/// Kahn's algorithm over the whole of `H_W`. On failure returns a directed
/// cycle among the cells left unsorted.
fn topological_cycle(cv: &ComplexView, faces: &FaceTable, m: &MatchingRecord) -> Option<Vec<usize>> {
    let len = cv.len();
    let mut out: Vec<Vec<u32>> = vec![Vec::new(); len];
    let mut indeg = vec![0u32; len];
    for x in 0..len {
        for f in faces.faces(x) {
            let y = f.face as usize;
            let (from, to) = if m.is_pair(cv, y, x) { (y, x) } else { (x, y) };
            out[from].push(to as u32);
            indeg[to] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..len).filter(|&i| indeg[i] == 0).collect();
    let mut sorted = 0;
    let mut remaining = indeg.clone();
    while let Some(v) = queue.pop_front() {
        sorted += 1;
        for &u in &out[v] {
            remaining[u as usize] -= 1;
            if remaining[u as usize] == 0 {
                queue.push_back(u as usize);
            }
        }
    }
    if sorted == len {
        return None;
    }
    // every unsorted cell has an unsorted predecessor; walk backwards
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); len];
    for (v, targets) in out.iter().enumerate() {
        if remaining[v] == 0 {
            continue;
        }
        for &u in targets {
            if remaining[u as usize] > 0 {
                preds[u as usize].push(v as u32);
            }
        }
    }
    let start = (0..len).find(|&i| remaining[i] > 0).unwrap();
    let mut seen = vec![usize::MAX; len];
    let mut walk = Vec::new();
    let mut cur = start;
    while seen[cur] == usize::MAX {
        seen[cur] = walk.len();
        walk.push(cur);
        cur = preds[cur][0] as usize;
    }
    let mut cyc: Vec<usize> = walk[seen[cur]..].to_vec();
    cyc.reverse();
    cyc.push(cyc[0]);
    Some(cyc)
}

/// Runs both cycle searches on `H_W`.
pub fn verify_acyclic(cv: &ComplexView, faces: &FaceTable, m: &MatchingRecord) -> AcyclicityReport {
    let g = cv.graph();
    let alt = alternating_cycle(cv, faces, m);
    let topo = topological_cycle(cv, faces, m);
    let witness = alt
        .as_ref()
        .or(topo.as_ref())
        .map(|c| c.iter().map(|&i| cv.cell(i).key(g)).collect());
    AcyclicityReport {
        acyclic: alt.is_none() && topo.is_none(),
        alternating_ok: alt.is_none(),
        topological_ok: topo.is_none(),
        witness,
    }
}

/// Whether every face of a critical cell is critical.
pub fn verify_critical_subcomplex(cv: &ComplexView, faces: &FaceTable, m: &MatchingRecord) -> bool {
    (0..cv.len())
        .filter(|&i| m.is_critical(i))
        .all(|i| faces.faces(i).iter().all(|f| m.is_critical(f.face as usize)))
}
