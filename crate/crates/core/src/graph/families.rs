//! Small named graphs used by the test battery and the examples.

use super::Graph;

/// Path through the given vertex labels; edge `i` is labelled by
/// concatenating its endpoint labels.
pub fn path(labels: &[&str]) -> Graph {
    let edges = labels
        .windows(2)
        .map(|w| (format!("{}{}", w[0], w[1]), w[0].to_string(), w[1].to_string()));
    Graph::new(labels.iter().map(|s| s.to_string()), edges).expect("path labels must be distinct")
}

/// Path with `m` vertices `v0..v{m-1}`.
pub fn path_of(m: usize) -> Graph {
    let labels: Vec<String> = (0..m).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    path(&refs)
}

/// Cycle with `m >= 1` vertices `v0..v{m-1}`; `m = 1` is a single loop and
/// `m = 2` a pair of parallel edges.
pub fn cycle(m: usize) -> Graph {
    assert!(m >= 1, "cycle needs at least one vertex");
    let vs: Vec<String> = (0..m).map(|i| format!("v{i}")).collect();
    let edges = (0..m).map(|i| {
        let j = (i + 1) % m;
        (format!("{}{}", vs[i], vs[j]), vs[i].clone(), vs[j].clone())
    });
    Graph::new(vs.clone(), edges).expect("cycle construction")
}

/// Star `K_{1,m}` with centre `c` and leaves `l1..lm`.
pub fn star(m: usize) -> Graph {
    let mut vs = vec!["c".to_string()];
    vs.extend((1..=m).map(|i| format!("l{i}")));
    let edges = (1..=m).map(|i| (format!("cl{i}"), "c".to_string(), format!("l{i}")));
    Graph::new(vs, edges).expect("star construction")
}

/// Theta-type graph: two poles `x`, `y` joined by internally disjoint
/// branches with the given numbers of edges.
pub fn theta(branch_lengths: &[usize]) -> Graph {
    let mut vs = vec!["x".to_string(), "y".to_string()];
    let mut edges = Vec::new();
    for (b, &len) in branch_lengths.iter().enumerate() {
        assert!(len >= 1);
        let mut prev = "x".to_string();
        for j in 1..len {
            let v = format!("b{b}_{j}");
            vs.push(v.clone());
            edges.push((format!("t{b}_{j}"), prev, v.clone()));
            prev = v;
        }
        edges.push((format!("t{b}_{len}"), prev, "y".to_string()));
    }
    Graph::new(vs, edges).expect("theta construction")
}
