//! Corrupts one pair of a verified matching and shows which check notices.

use std::sync::Arc;

use nkconfig::complex::{enumerate_dconf, DEFAULT_CELL_BUDGET};
use nkconfig::graph::theta;
use nkconfig::morse::{
    build_matching, check_pairs, inject_fault, verify_acyclic, verify_critical_subcomplex, FaultKind,
};
use nkconfig::subdivision::subdivide;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(theta(&[2, 2, 3]));
    let ctx = subdivide(&g, "t2_2", "w")?;
    let cv = enumerate_dconf(ctx.g_sub_arc().clone(), 2, 3, DEFAULT_CELL_BUDGET)?;
    let faces = cv.face_table()?;
    let m = build_matching(&cv, &ctx)?;
    for kind in FaultKind::ALL {
        let Some(bad) = inject_fault(&cv, &faces, &m, kind, 0) else { continue };
        let pairs = check_pairs(&cv, &ctx, &bad);
        let acyc = verify_acyclic(&cv, &faces, &bad);
        println!(
            "{kind:?}: pair coherence {}, critical closed {}, acyclic {}",
            if pairs.ok { "ok".to_string() } else { format!("{} violation(s)", pairs.violations.len()) },
            verify_critical_subcomplex(&cv, &faces, &bad),
            acyc.acyclic
        );
        if let Some(w) = acyc.witness {
            println!("  cycle: {}", w.join(" "));
        }
    }
    Ok(())
}
