//! Betti numbers over Q and F2 for a few small configuration spaces.

use std::sync::Arc;

use nkconfig::complex::{enumerate_dconf, DEFAULT_CELL_BUDGET};
use nkconfig::graph::{cycle, path, star, theta};
use nkconfig::homology::{betti_numbers, Coefficients};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("DConf^2(C3,2)", cycle(3), 2, 2),
        ("DConf^2(K13,2)", star(3), 2, 2),
        ("DConf^3(edge,3)", path(&["a", "b"]), 3, 3),
        ("DConf^2(C5,3)", cycle(5), 2, 3),
        ("DConf^3(theta,4)", theta(&[2, 2, 3]), 3, 4),
    ];
    for (name, g, k, n) in cases {
        let cv = enumerate_dconf(Arc::new(g), k, n, DEFAULT_CELL_BUDGET)?;
        let q = betti_numbers(&cv, Coefficients::Rational)?;
        let f2 = betti_numbers(&cv, Coefficients::Mod2)?;
        println!("{name}: Q {:?}  F2 {:?}  chi {}", q.betti.trimmed(), f2.betti.trimmed(), q.euler);
    }
    Ok(())
}
