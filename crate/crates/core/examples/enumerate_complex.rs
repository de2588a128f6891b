//! Enumerates DConf^k(G, n) and prints cell counts by dimension, the Euler
//! characteristic and a few cells.

use std::sync::Arc;

use nkconfig::complex::{enumerate_dconf, DEFAULT_CELL_BUDGET};
use nkconfig::graph::{cycle, path, star};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, g, k, n) in [
        ("P4", path(&["p", "q", "r", "s"]), 2, 2),
        ("C4", cycle(4), 2, 3),
        ("K13", star(3), 3, 3),
    ] {
        let cv = enumerate_dconf(Arc::new(g), k, n, DEFAULT_CELL_BUDGET)?;
        println!(
            "DConf^{k}({name},{n}): {} cells {:?}, chi = {}",
            cv.len(),
            cv.counts(),
            cv.euler_characteristic()
        );
        for c in cv.cells_of_dim(cv.top_dim().unwrap_or(0)).iter().take(3) {
            println!("  {}", c.key(cv.graph()));
        }
    }
    Ok(())
}
