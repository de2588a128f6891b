//! Test battery and independent oracles. The oracles work on label tuples
//! and share no code with the library beyond reading graph tables.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use nkconfig::complex::{Cell, Coord};
use nkconfig::graph::{cycle, path_of, star, theta, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    V(String),
    E(String),
}

pub type LabelCell = Vec<Item>;

pub fn battery() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for m in 2..=6 {
        out.push((format!("P{m}"), path_of(m)));
    }
    for m in 3..=6 {
        out.push((format!("C{m}"), cycle(m)));
    }
    out.push(("K13".into(), star(3)));
    out.push(("K14".into(), star(4)));
    out.push(("theta223".into(), theta(&[2, 2, 3])));
    out
}

/// All `(k, n)` with `2 <= k <= n <= max_n`.
pub fn kn_pairs(max_n: usize) -> Vec<(usize, usize)> {
    (2..=max_n).flat_map(|n| (2..=n).map(move |k| (k, n))).collect()
}

fn items(g: &Graph) -> Vec<Item> {
    let mut v: Vec<Item> = g.vertex_ids().map(|v| Item::V(g.vertex_label(v).into())).collect();
    v.extend(g.edge_ids().map(|e| Item::E(g.edge_label(e).into())));
    v
}

fn edge_ends(g: &Graph) -> HashMap<String, [String; 2]> {
    g.edge_ids()
        .map(|e| {
            let [a, b] = g.ends(e);
            (
                g.edge_label(e).to_string(),
                [g.vertex_label(a).to_string(), g.vertex_label(b).to_string()],
            )
        })
        .collect()
}

/// Number of entries whose closure contains `v`, by direct scan.
pub fn closure_count(ends: &HashMap<String, [String; 2]>, cell: &[Item], v: &str) -> usize {
    cell.iter()
        .filter(|it| match it {
            Item::V(u) => u == v,
            Item::E(e) => ends[e].iter().any(|u| u == v),
        })
        .count()
}

pub fn to_labels(g: &Graph, c: &Cell) -> LabelCell {
    c.coords()
        .iter()
        .map(|&x| match x {
            Coord::Vertex(v) => Item::V(g.vertex_label(v).into()),
            Coord::Edge(e) => Item::E(g.edge_label(e).into()),
        })
        .collect()
}

/// Filters all `(|V| + |E|)^n` tuples by the collision criterion.
pub fn brute_force_dconf(g: &Graph, k: usize, n: usize) -> BTreeSet<LabelCell> {
    let its = items(g);
    let ends = edge_ends(g);
    let verts: Vec<String> = g.vertex_ids().map(|v| g.vertex_label(v).into()).collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let cell: LabelCell = idx.iter().map(|&i| its[i].clone()).collect();
        if verts.iter().all(|v| closure_count(&ends, &cell, v) < k) {
            out.insert(cell);
        }
        let mut p = 0;
        loop {
            if p == n {
                return out;
            }
            idx[p] += 1;
            if idx[p] < its.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn dim(c: &[Item]) -> usize {
    c.iter().filter(|i| matches!(i, Item::E(_))).count()
}

/// Dense boundary matrices with the declared edge orientation (`ends[0]`
/// positive), which differs from the library's label-based orientation by a
/// change of basis only.
fn dense_boundaries(g: &Graph, cells: &BTreeSet<LabelCell>) -> (Vec<usize>, Vec<Vec<Vec<i64>>>) {
    let ends = edge_ends(g);
    let top = cells.iter().map(|c| dim(c)).max().unwrap_or(0);
    let mut by_dim: Vec<Vec<&LabelCell>> = vec![Vec::new(); top + 1];
    for c in cells {
        by_dim[dim(c)].push(c);
    }
    let index: Vec<HashMap<&LabelCell, usize>> = by_dim
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, c)| (*c, i)).collect())
        .collect();
    let mut mats = Vec::new();
    for d in 1..=top {
        let mut m = vec![vec![0i64; by_dim[d].len()]; by_dim[d - 1].len()];
        for (j, c) in by_dim[d].iter().enumerate() {
            let mut before = 0;
            for (t, it) in c.iter().enumerate() {
                let Item::E(e) = it else { continue };
                let s = if before % 2 == 0 { 1 } else { -1 };
                before += 1;
                for (end, sign) in [(0, s), (1, -s)] {
                    let mut f = (*c).clone();
                    f[t] = Item::V(ends[e][end].clone());
                    let i = *index[d - 1].get(&f).expect("complex is face-closed");
                    m[i][j] += sign;
                }
            }
        }
        mats.push(m);
    }
    (by_dim.iter().map(Vec::len).collect(), mats)
}

/// Bareiss fraction-free elimination; exact for the small matrices used
/// here, panics on overflow rather than returning a wrong rank.
pub fn dense_rank_q(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let (mut r, mut prev) = (0, 1i128);
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = a[r][c]
                    .checked_mul(a[i][j])
                    .and_then(|x| x.checked_sub(a[i][c].checked_mul(a[r][j])?))
                    .expect("Bareiss overflow");
                a[i][j] = v / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn dense_rank_f2(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<u8>> = m.iter().map(|r| r.iter().map(|&x| x.rem_euclid(2) as u8).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] == 1) else { continue };
        a.swap(r, p);
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] == 1 {
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Betti numbers `0..=top` of a face-closed label complex.
pub fn oracle_betti(g: &Graph, cells: &BTreeSet<LabelCell>, mod2: bool) -> Vec<usize> {
    let (counts, mats) = dense_boundaries(g, cells);
    let ranks: Vec<usize> = mats
        .iter()
        .map(|m| if mod2 { dense_rank_f2(m) } else { dense_rank_q(m) })
        .collect();
    let r = |d: usize| if d == 0 { 0 } else { ranks.get(d - 1).copied().unwrap_or(0) };
    (0..counts.len()).map(|d| counts[d] - r(d) - r(d + 1)).collect()
}

/// `Y` as the union of deflations: each entry equal to the subdivided edge
/// `a` becomes an endpoint of `a`, the new vertex `w`, or a half of `a`.
pub fn oracle_y(g: &Graph, g_sub: &Graph, a: &str, w: &str, cells_of_g: &[LabelCell]) -> BTreeSet<LabelCell> {
    let ends = edge_ends(g);
    let wid = g_sub.vertex_id(w).unwrap();
    let halves: Vec<String> = g_sub
        .incidences(wid)
        .iter()
        .map(|&e| g_sub.edge_label(e).to_string())
        .collect();
    let mut options: Vec<Item> = ends[a].iter().map(|v| Item::V(v.clone())).collect();
    options.push(Item::V(w.into()));
    options.extend(halves.into_iter().map(Item::E));
    options.sort();
    options.dedup();
    let mut out = BTreeSet::new();
    for x in cells_of_g {
        let mut partial: Vec<LabelCell> = vec![Vec::new()];
        for it in x {
            partial = if *it == Item::E(a.into()) {
                partial
                    .into_iter()
                    .flat_map(|p| {
                        options.iter().map(move |o| {
                            let mut q = p.clone();
                            q.push(o.clone());
                            q
                        })
                    })
                    .collect()
            } else {
                partial
                    .into_iter()
                    .map(|mut p| {
                        p.push(it.clone());
                        p
                    })
                    .collect()
            };
        }
        out.extend(partial);
    }
    out
}

pub fn edge_ends_of(g: &Graph) -> HashMap<String, [String; 2]> {
    edge_ends(g)
}
