//! Sufficient subdivision on the graph with a double edge: two violations
//! for (k, n) = (2, 3), none after enough midpoints are inserted.

use nkconfig::graph::{check_sufficiently_subdivided, Graph};
use nkconfig::subdivision::subdivide_edge;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = Graph::from_edges(
        &["a", "b", "c"],
        &[("ab", "a", "b"), ("bc1", "b", "c"), ("bc2", "b", "c")],
    )?;
    let report = check_sufficiently_subdivided(&g, 2, 3)?;
    println!("{}", serde_json::to_string_pretty(&report)?);

    // one vertex on ab, two on the cycle through b
    let g = subdivide_edge(&g, "ab", "m")?;
    let g = subdivide_edge(&g, "bc1", "p")?;
    let g = subdivide_edge(&g, "bc2", "q")?;
    let report = check_sufficiently_subdivided(&g, 2, 3)?;
    println!("after subdividing: ok = {}", report.ok);
    Ok(())
}
