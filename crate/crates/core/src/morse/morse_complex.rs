//! The Morse complex of an acyclic matching: critical cells with boundary
//! given by signed counts of gradient paths.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{MatchingRecord, MorseError};
use crate::complex::{ComplexView, FaceTable};
use crate::homology::{face_sign, Betti, Coefficients, SparseMatrix};

type Chain = Vec<(u32, i64)>;

fn add_scaled(acc: &mut BTreeMap<u32, i64>, chain: &Chain, c: i64) -> Result<(), MorseError> {
    for &(k, v) in chain {
        let e = acc.entry(k).or_default();
        *e = v
            .checked_mul(c)
            .and_then(|p| e.checked_add(p))
            .ok_or(MorseError::CoefficientOverflow)?;
    }
    Ok(())
}

// incidence numbers of x on each distinct face, summed over coinciding faces
fn face_coefficients(cv: &ComplexView, faces: &FaceTable, x: usize) -> BTreeMap<u32, i64> {
    let g = cv.graph();
    let mut acc = BTreeMap::new();
    for f in faces.faces(x) {
        *acc.entry(f.face).or_default() += face_sign(g, cv.cell(x), f);
    }
    acc
}

/// The image of a cell under the gradient flow, as a chain of critical
/// cells of the same dimension (indexed by position among critical cells of
/// that dimension). Memoized, and computed without recursion.
struct Flow<'a> {
    cv: &'a ComplexView,
    faces: &'a FaceTable,
    m: &'a MatchingRecord,
    crit_pos: &'a [u32],
    memo: HashMap<usize, Chain>,
}

impl Flow<'_> {
    fn up_mate(&self, y: usize) -> Option<usize> {
        self.m.mate(y).filter(|&x| self.m.is_pair(self.cv, y, x))
    }

    fn get(&mut self, root: usize) -> Result<Chain, MorseError> {
        if let Some(c) = self.memo.get(&root) {
            return Ok(c.clone());
        }
        // cells whose flow waits on other cells
        let mut stack: Vec<usize> = vec![root];
        let mut on_stack: HashSet<usize> = HashSet::new();
        while let Some(&y) = stack.last() {
            if self.memo.contains_key(&y) {
                stack.pop();
                continue;
            }
            if self.m.is_critical(y) {
                self.memo.insert(y, vec![(self.crit_pos[y], 1)]);
                stack.pop();
                continue;
            }
            let Some(x) = self.up_mate(y) else {
                // collapsible cells and corrupted mates carry no flow
                self.memo.insert(y, Vec::new());
                stack.pop();
                continue;
            };
            let coeffs = face_coefficients(self.cv, self.faces, x);
            let pending: Vec<usize> = coeffs
                .keys()
                .map(|&z| z as usize)
                .filter(|&z| z != y && !self.memo.contains_key(&z))
                .collect();
            if !pending.is_empty() {
                if !on_stack.insert(y) {
                    return Err(MorseError::Cyclic(self.cv.cell(y).key(self.cv.graph())));
                }
                for z in pending {
                    if on_stack.contains(&z) {
                        return Err(MorseError::Cyclic(self.cv.cell(z).key(self.cv.graph())));
                    }
                    stack.push(z);
                }
                continue;
            }
            // y = -[x:y] * sum_{z != y} [x:z] z, with [x:y] = +-1
            let xy = coeffs.get(&(y as u32)).copied().unwrap_or(0);
            let mut acc = BTreeMap::new();
            if xy != 0 {
                for (&z, &c) in &coeffs {
                    if z as usize != y {
                        add_scaled(&mut acc, &self.memo[&(z as usize)], -xy * c)?;
                    }
                }
            }
            self.memo
                .insert(y, acc.into_iter().filter(|&(_, v)| v != 0).collect());
            on_stack.remove(&y);
            stack.pop();
        }
        Ok(self.memo[&root].clone())
    }
}

/// Boundary matrices of the Morse complex, one per dimension `1..=top`,
/// over the integers. Rows and columns follow the order of critical cells
/// in the view.
pub fn morse_boundaries(
    cv: &ComplexView,
    faces: &FaceTable,
    m: &MatchingRecord,
) -> Result<(Vec<usize>, Vec<SparseMatrix>), MorseError> {
    let top = cv.top_dim().unwrap_or(0);
    let mut crit_pos = vec![u32::MAX; cv.len()];
    let mut counts = vec![0usize; top + 1];
    for (i, pos) in crit_pos.iter_mut().enumerate() {
        if m.is_critical(i) {
            let d = cv.dim_of(i);
            *pos = counts[d] as u32;
            counts[d] += 1;
        }
    }
    let mut flow = Flow {
        cv,
        faces,
        m,
        crit_pos: &crit_pos,
        memo: HashMap::new(),
    };
    let mut mats = Vec::new();
    for d in 1..=top {
        let mut columns = Vec::with_capacity(counts[d]);
        for c in cv.dim_range(d).filter(|&i| m.is_critical(i)) {
            let mut acc = BTreeMap::new();
            for (y, s) in face_coefficients(cv, faces, c) {
                let chain = flow.get(y as usize)?;
                add_scaled(&mut acc, &chain, s)?;
            }
            columns.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        mats.push(SparseMatrix {
            rows: counts[d - 1],
            cols: counts[d],
            columns,
        });
    }
    Ok((counts, mats))
}

/// Betti numbers computed from the Morse complex.
pub fn morse_betti(
    cv: &ComplexView,
    faces: &FaceTable,
    m: &MatchingRecord,
    coeff: Coefficients,
) -> Result<Betti, MorseError> {
    let (counts, mats) = morse_boundaries(cv, faces, m)?;
    let ranks: Vec<usize> = mats.iter().map(|x| x.rank(coeff)).collect();
    let r = |d: usize| if d == 0 { 0 } else { ranks.get(d - 1).copied().unwrap_or(0) };
    let Some(top) = counts.iter().rposition(|&c| c > 0) else {
        return Ok(Betti(Vec::new()));
    };
    Ok(Betti((0..=top).map(|d| counts[d] - r(d) - r(d + 1)).collect()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complex::{enumerate_dconf, DEFAULT_CELL_BUDGET};
    use crate::graph::{cycle, path};
    use crate::homology::{betti_numbers, ChainComplex};
    use crate::morse::build_matching;
    use crate::subdivision::subdivide;

    #[test]
    fn p5_morse_betti() {
        let g = Arc::new(path(&["p", "q", "r", "s"]));
        let ctx = subdivide(&g, "qr", "w").unwrap();
        let cv = enumerate_dconf(ctx.g_sub_arc().clone(), 2, 2, DEFAULT_CELL_BUDGET).unwrap();
        let faces = cv.face_table().unwrap();
        let m = build_matching(&cv, &ctx).unwrap();
        for coeff in [Coefficients::Rational, Coefficients::Mod2] {
            let b = morse_betti(&cv, &faces, &m, coeff).unwrap();
            assert_eq!(b, Betti(vec![2, 0]));
            assert_eq!(b, betti_numbers(&cv, coeff).unwrap().betti);
        }
    }

    #[test]
    fn c4_morse_betti() {
        let g = Arc::new(cycle(3));
        let ctx = subdivide(&g, "v0v1", "w").unwrap();
        let cv = enumerate_dconf(ctx.g_sub_arc().clone(), 2, 2, DEFAULT_CELL_BUDGET).unwrap();
        let faces = cv.face_table().unwrap();
        let m = build_matching(&cv, &ctx).unwrap();
        let b = morse_betti(&cv, &faces, &m, Coefficients::Mod2).unwrap();
        assert_eq!(b, Betti(vec![1, 1]));
    }

    #[test]
    fn empty_matching_reproduces_cellular_boundary() {
        let cv = enumerate_dconf(Arc::new(cycle(4)), 2, 2, DEFAULT_CELL_BUDGET).unwrap();
        let faces = cv.face_table().unwrap();
        let m = MatchingRecord::empty(cv.len());
        let (_, mats) = morse_boundaries(&cv, &faces, &m).unwrap();
        let cc = ChainComplex::build(&cv).unwrap();
        for (d, mat) in mats.iter().enumerate() {
            assert_eq!(mat, cc.boundary(d + 1).unwrap());
        }
    }

    #[test]
    fn morse_boundary_squares_to_zero() {
        let g = Arc::new(path(&["a", "b", "c", "d", "e"]));
        let ctx = subdivide(&g, "bc", "w").unwrap();
        let cv = enumerate_dconf(ctx.g_sub_arc().clone(), 3, 3, DEFAULT_CELL_BUDGET).unwrap();
        let faces = cv.face_table().unwrap();
        let m = build_matching(&cv, &ctx).unwrap();
        let (_, mats) = morse_boundaries(&cv, &faces, &m).unwrap();
        for w in mats.windows(2) {
            assert!(w[0].mul(&w[1]).unwrap().is_zero(Coefficients::Rational));
        }
    }
}
