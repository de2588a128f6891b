//! Betti numbers of DConf^k(B_j, n) over iterated barycentric subdivisions.
//! The star K_{1,4} is not (2,3)-sufficiently subdivided, and its homology
//! changes once before settling.

use std::sync::Arc;

use nkconfig::cli::barycentric;
use nkconfig::complex::{enumerate_dconf, DEFAULT_CELL_BUDGET};
use nkconfig::graph::{check_sufficiently_subdivided, star};
use nkconfig::homology::{betti_numbers, Coefficients};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (k, n) = (2, 3);
    let mut g = star(4);
    for j in 0..=2 {
        if j > 0 {
            g = barycentric(&g)?;
        }
        let sufficient = check_sufficiently_subdivided(&g, k, n)?.ok;
        let cv = enumerate_dconf(Arc::new(g.clone()), k, n, DEFAULT_CELL_BUDGET)?;
        let b = betti_numbers(&cv, Coefficients::Rational)?.betti;
        println!("B_{j}: {} cells, sufficient {sufficient}, betti {:?}", cv.len(), b.trimmed());
    }
    Ok(())
}
