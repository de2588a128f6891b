//! Discrete models of no-k-equal configuration spaces on graphs.
//!
//! For a finite connected graph `G` and `2 <= k <= n`, `DConf^k(G, n)` is the
//! largest subcomplex of the cubical complex `G^n` containing no `k`-fold
//! collision. This crate enumerates these complexes, computes their Betti
//! numbers, and for a single edge subdivision `G -> G'` builds the discrete
//! gradient field on `DConf^k(G', n)` whose critical cells form a copy `Y` of
//! `DConf^k(G, n)`, then certifies the field instance by instance.

pub mod cli;
pub mod complex;
pub mod graph;
pub mod homology;
pub mod morse;
pub mod subdivision;
