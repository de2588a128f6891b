//! Builds the matching for P4 -> P5 with (k, n) = (2, 2), verifies it, and
//! compares homology through the Morse complex.

use std::sync::Arc;

use nkconfig::complex::{enumerate_dconf, DEFAULT_CELL_BUDGET};
use nkconfig::graph::path;
use nkconfig::homology::{betti_numbers, Coefficients};
use nkconfig::morse::{build_matching, check_lemmas, check_pairs, morse_betti, verify_acyclic, Instance};
use nkconfig::subdivision::subdivide;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(path(&["p", "q", "r", "s"]));
    let ctx = subdivide(&g, "qr", "w")?;
    let cv = enumerate_dconf(ctx.g_sub_arc().clone(), 2, 2, DEFAULT_CELL_BUDGET)?;
    let faces = cv.face_table()?;
    let m = build_matching(&cv, &ctx)?;
    println!(
        "{} cells, {} external, {} pairs, critical by dimension {:?}",
        cv.len(),
        m.external_count(),
        check_pairs(&cv, &ctx, &m).pairs,
        m.critical_counts(&cv)
    );
    for (lo, hi) in m.pairs(&cv) {
        let r = m.info(lo).unwrap();
        println!(
            "  {} -> {}  rank {} t {}",
            cv.cell(lo).key(ctx.g_sub()),
            cv.cell(hi).key(ctx.g_sub()),
            r.rank,
            r.t
        );
    }
    println!("acyclic: {}", verify_acyclic(&cv, &faces, &m).acyclic);
    let lemmas = check_lemmas(&Instance {
        cv: &cv,
        ctx: &ctx,
        faces: &faces,
        matching: &m,
    });
    println!("lemma checks pass: {}", lemmas.all_ok());
    let full = betti_numbers(&cv, Coefficients::Rational)?.betti;
    let morse = morse_betti(&cv, &faces, &m, Coefficients::Rational)?;
    println!("betti {:?} (cells) vs {:?} (Morse)", full.trimmed(), morse.trimmed());
    Ok(())
}
