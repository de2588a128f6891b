//! The labelling around a subdivided edge and the deflation of one cell.

use std::sync::Arc;

use nkconfig::complex::Cell;
use nkconfig::graph::{cycle, path};
use nkconfig::subdivision::subdivide;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Arc::new(path(&["p", "q", "r", "s"]));
    let ctx = subdivide(&g, "qr", "w")?;
    println!("{}", serde_json::to_string_pretty(&ctx.to_json_value())?);

    let x = Cell::from_labels(&g, &["qr", "p"])?;
    for y in ctx.deflate(&x, 2)? {
        let ext = ctx.is_external(&y, 2)?;
        println!("  {} external={ext}", y.key(ctx.g_sub()));
    }

    // on a cycle the walk returns to its start
    let c = Arc::new(cycle(4));
    let ctx = subdivide(&c, "v1v2", "w")?;
    println!("C4 at v1v2: case {:?}, i = {}, l = {}", ctx.case(), ctx.i(), ctx.l());
    Ok(())
}
