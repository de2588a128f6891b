use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use super::{Cell, ComplexError, ComplexView, Coord};
use crate::graph::Graph;

pub const DEFAULT_CELL_BUDGET: usize = 10_000_000;

struct Search<'a> {
    g: &'a Graph,
    items: &'a [Coord],
    k: usize,
    n: usize,
    budget: usize,
    produced: &'a AtomicUsize,
    aborted: &'a AtomicBool,
}

impl Search<'_> {
    fn admit(&self, counts: &mut [usize], c: Coord) -> bool {
        match c {
            Coord::Vertex(v) => {
                if counts[v.index()] + 1 >= self.k {
                    return false;
                }
                counts[v.index()] += 1;
            }
            Coord::Edge(e) => {
                let [a, b] = self.g.ends(e);
                if counts[a.index()] + 1 >= self.k || counts[b.index()] + 1 >= self.k {
                    return false;
                }
                counts[a.index()] += 1;
                if b != a {
                    counts[b.index()] += 1;
                }
            }
        }
        true
    }

    fn release(&self, counts: &mut [usize], c: Coord) {
        match c {
            Coord::Vertex(v) => counts[v.index()] -= 1,
            Coord::Edge(e) => {
                let [a, b] = self.g.ends(e);
                counts[a.index()] -= 1;
                if b != a {
                    counts[b.index()] -= 1;
                }
            }
        }
    }

    fn descend(&self, prefix: &mut Vec<Coord>, counts: &mut [usize], out: &mut Vec<Cell>) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if prefix.len() == self.n {
            if self.produced.fetch_add(1, Ordering::Relaxed) >= self.budget {
                self.aborted.store(true, Ordering::Relaxed);
                return;
            }
            out.push(Cell::new(prefix.clone()));
            return;
        }
        for &c in self.items {
            if self.admit(counts, c) {
                prefix.push(c);
                self.descend(prefix, counts, out);
                prefix.pop();
                self.release(counts, c);
            }
        }
    }
}

/// Enumerates every cell of `DConf^k(G, n)`.
///
/// Depth-first over positions, cutting a prefix as soon as some closure count
/// would reach `k`. The first position is split across worker threads; output
/// order is lexicographic regardless of scheduling. Exceeding `budget` cells
/// is an error.
pub fn enumerate_dconf(
    graph: Arc<Graph>,
    k: usize,
    n: usize,
    budget: usize,
) -> Result<ComplexView, ComplexError> {
    if k < 2 || k > n || n > 64 {
        return Err(ComplexError::InvalidParameters { k, n });
    }
    graph.ensure_connected()?;
    let g = &*graph;
    let items: Vec<Coord> = g
        .vertex_ids()
        .map(Coord::Vertex)
        .chain(g.edge_ids().map(Coord::Edge))
        .collect();
    let produced = AtomicUsize::new(0);
    let aborted = AtomicBool::new(false);
    let search = Search {
        g,
        items: &items,
        k,
        n,
        budget,
        produced: &produced,
        aborted: &aborted,
    };
    let chunks: Vec<Vec<Cell>> = items
        .par_iter()
        .map(|&first| {
            let mut out = Vec::new();
            let mut counts = vec![0usize; g.vertex_count()];
            if search.admit(&mut counts, first) {
                let mut prefix = vec![first];
                search.descend(&mut prefix, &mut counts, &mut out);
            }
            out
        })
        .collect();
    if aborted.load(Ordering::Relaxed) {
        return Err(ComplexError::BudgetExceeded { budget });
    }
    let cells: Vec<Cell> = chunks.into_iter().flatten().collect();
    Ok(ComplexView::from_sorted_unique(graph, k, n, cells))
}
