//! Cellular chain complex of a cubical complex and its Betti numbers.
//!
//! A `d`-cell is a product of `d` edge intervals. The boundary of a cell
//! collapses each edge entry to each of its endpoints; the face keeping the
//! source endpoint (smaller label) enters with `+`, the target with `-`, and
//! both are scaled by `(-1)^m` where `m` counts edge entries before the
//! collapsed one. Both faces of a loop coincide and cancel.

mod rank;

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Cell, ComplexError, ComplexView, Coord, FaceEntry, FaceTable};
use crate::graph::{EdgeId, Graph};

pub use rank::{pivots_mod2, pivots_rational, rank_mod2, rank_rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("Betti numbers give Euler characteristic {betti} but cells give {cells}")]
    EulerMismatch { betti: i64, cells: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    #[serde(rename = "q")]
    Rational,
    #[serde(rename = "f2")]
    Mod2,
}

impl Coefficients {
    pub fn name(self) -> &'static str {
        match self {
            Coefficients::Rational => "q",
            Coefficients::Mod2 => "f2",
        }
    }
}

impl std::str::FromStr for Coefficients {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" | "Q" => Ok(Coefficients::Rational),
            "f2" | "F2" => Ok(Coefficients::Mod2),
            other => Err(format!("unknown coefficient field {other:?}")),
        }
    }
}

/// Betti numbers indexed by dimension. Equality ignores trailing zeros.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Betti(pub Vec<usize>);

impl Betti {
    pub fn trimmed(&self) -> &[usize] {
        let end = self.0.iter().rposition(|&b| b != 0).map_or(0, |i| i + 1);
        &self.0[..end]
    }

    pub fn get(&self, d: usize) -> usize {
        self.0.get(d).copied().unwrap_or(0)
    }

    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

impl PartialEq for Betti {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for Betti {}

impl From<Vec<usize>> for Betti {
    fn from(v: Vec<usize>) -> Self {
        Betti(v)
    }
}

/// A sparse integer matrix stored by columns, rows sorted within a column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn rank(&self, coeff: Coefficients) -> usize {
        match coeff {
            Coefficients::Rational => rank_rational(&self.columns),
            Coefficients::Mod2 => rank_mod2(&self.columns),
        }
    }

    /// `self * rhs`, or `None` if the shapes do not chain.
    pub fn mul(&self, rhs: &SparseMatrix) -> Option<SparseMatrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                for &(mid, b) in col {
                    for &(r, a) in &self.columns[mid as usize] {
                        *acc.entry(r).or_default() += a * b;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        Some(SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    pub fn is_zero(&self, coeff: Coefficients) -> bool {
        self.columns.iter().flatten().all(|&(_, v)| match coeff {
            Coefficients::Rational => v == 0,
            Coefficients::Mod2 => v % 2 == 0,
        })
    }

    /// Writes `row col value` lines (0-based) after a `# rows cols nnz` header.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# {} {} {}", self.rows, self.cols, self.nnz())?;
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                writeln!(w, "{r} {c} {v}")?;
            }
        }
        Ok(())
    }
}

fn source_end(g: &Graph, e: EdgeId) -> u8 {
    let [a, b] = g.ends(e);
    if g.vertex_label(b) < g.vertex_label(a) {
        1
    } else {
        0
    }
}

/// Incidence number of `cell` on the face described by `f`.
pub fn face_sign(g: &Graph, cell: &Cell, f: &FaceEntry) -> i64 {
    let t = f.coord as usize;
    let Coord::Edge(e) = cell.get(t) else {
        panic!("faces collapse edge entries")
    };
    let before = cell.coords()[..t].iter().filter(|c| c.is_edge()).count();
    let s = if before % 2 == 0 { 1 } else { -1 };
    if f.end == source_end(g, e) {
        s
    } else {
        -s
    }
}

/// Cellular boundary of a single cell as a chain; coinciding faces are
/// summed and zero coefficients dropped.
pub fn cell_boundary(g: &Graph, cell: &Cell) -> BTreeMap<Cell, i64> {
    let mut out = BTreeMap::new();
    for (t, &c) in cell.coords().iter().enumerate() {
        let Coord::Edge(e) = c else { continue };
        for (end, v) in g.ends(e).into_iter().enumerate() {
            let f = FaceEntry {
                face: 0,
                coord: t as u8,
                end: end as u8,
            };
            *out.entry(cell.with(t, Coord::Vertex(v))).or_default() += face_sign(g, cell, &f);
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Boundary matrices `d_1, ..., d_top` of a face-closed complex.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    counts: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn build(cv: &ComplexView) -> Result<Self, ComplexError> {
        let table = cv.face_table()?;
        Ok(Self::from_table(cv, &table))
    }

    pub fn from_table(cv: &ComplexView, table: &FaceTable) -> Self {
        let g = cv.graph();
        let counts = cv.counts();
        let top = cv.top_dim().unwrap_or(0);
        let mut boundaries = Vec::new();
        for d in 1..=top {
            let row_start = cv.dim_range(d - 1).start;
            let columns = cv
                .dim_range(d)
                .map(|i| {
                    let cell = cv.cell(i);
                    let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                    for f in table.faces(i) {
                        *acc.entry(f.face - row_start as u32).or_default() += face_sign(g, cell, f);
                    }
                    acc.into_iter().filter(|&(_, v)| v != 0).collect()
                })
                .collect();
            boundaries.push(SparseMatrix {
                rows: counts[d - 1],
                cols: counts[d],
                columns,
            });
        }
        ChainComplex { counts, boundaries }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// The matrix of `d_d : C_d -> C_{d-1}`, for `1 <= d <= top`.
    pub fn boundary(&self, d: usize) -> Option<&SparseMatrix> {
        d.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    /// Whether every composite `d_{d} d_{d+1}` vanishes.
    pub fn boundary_squares_to_zero(&self, coeff: Coefficients) -> bool {
        self.boundaries
            .windows(2)
            .all(|w| w[0].mul(&w[1]).is_some_and(|m| m.is_zero(coeff)))
    }

    /// Ranks of `d_1, ..., d_top`. Dimensions are reduced from the top down;
    /// a column whose cell is a pivot row one dimension up reduces to zero
    /// and is skipped.
    pub fn ranks(&self, coeff: Coefficients) -> Vec<usize> {
        let mut ranks = vec![0; self.boundaries.len()];
        let mut cleared: Vec<bool> = Vec::new();
        for (idx, m) in self.boundaries.iter().enumerate().rev() {
            let pivots = match coeff {
                Coefficients::Rational => pivots_rational(&m.columns, &cleared),
                Coefficients::Mod2 => pivots_mod2(&m.columns, &cleared),
            };
            ranks[idx] = pivots.len();
            cleared = vec![false; m.rows];
            for p in pivots {
                cleared[p as usize] = true;
            }
        }
        ranks
    }

    pub fn betti(&self, coeff: Coefficients) -> Betti {
        let ranks = self.ranks(coeff);
        let r = |d: usize| if d == 0 { 0 } else { ranks.get(d - 1).copied().unwrap_or(0) };
        let top = self.counts.iter().rposition(|&c| c > 0);
        let Some(top) = top else {
            return Betti(Vec::new());
        };
        Betti((0..=top).map(|d| self.counts[d] - r(d) - r(d + 1)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    pub coeff: Coefficients,
    pub betti: Betti,
    pub euler: i64,
}

/// Betti numbers of a face-closed complex, cross-checked against its Euler
/// characteristic.
pub fn betti_numbers(cv: &ComplexView, coeff: Coefficients) -> Result<BettiReport, HomologyError> {
    let betti = ChainComplex::build(cv)?.betti(coeff);
    let cells = cv.euler_characteristic();
    if betti.euler() != cells {
        return Err(HomologyError::EulerMismatch {
            betti: betti.euler(),
            cells,
        });
    }
    Ok(BettiReport {
        coeff,
        betti,
        euler: cells,
    })
}
