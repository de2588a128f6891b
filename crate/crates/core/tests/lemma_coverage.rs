//! The lemma checks must not pass vacuously: across a few graphs outside
//! the main battery, every arrow case occurs and the cycle-case rank bound
//! is exercised, all without violations.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use nkconfig::complex::enumerate_dconf;
use nkconfig::graph::{check_sufficiently_subdivided, theta, Graph};
use nkconfig::morse::{check_lemmas, pair_external_cells, Instance};
use nkconfig::subdivision::{fresh_vertex_label, subdivide};

fn from_chains(chains: &[&[&str]]) -> Graph {
    let mut vs: Vec<String> = Vec::new();
    let mut es = Vec::new();
    for ch in chains {
        for v in *ch {
            if !vs.iter().any(|x| x == v) {
                vs.push(v.to_string());
            }
        }
        for w in ch.windows(2) {
            es.push((format!("{}{}", w[0], w[1]), w[0].to_string(), w[1].to_string()));
        }
    }
    Graph::new(vs, es).unwrap()
}

#[derive(Default)]
struct Coverage {
    cases: BTreeMap<String, usize>,
    cycle_bound: usize,
    instances: usize,
}

fn sweep(cov: &mut Coverage, g: Graph, kn: &[(usize, usize)]) {
    let g = Arc::new(g);
    let mut labels: Vec<String> = g.edge_ids().map(|e| g.edge_label(e).to_string()).collect();
    labels.sort();
    for &(k, n) in kn {
        assert!(check_sufficiently_subdivided(&g, k, n).unwrap().ok, "({k},{n})");
        for e in &labels {
            let ctx = subdivide(&g, e, &fresh_vertex_label(&g)).unwrap();
            let cv = enumerate_dconf(ctx.g_sub_arc().clone(), k, n, 2_000_000).unwrap();
            let faces = cv.face_table().unwrap();
            let m = pair_external_cells(&cv, &ctx).unwrap();
            let r = check_lemmas(&Instance {
                cv: &cv,
                ctx: &ctx,
                faces: &faces,
                matching: &m,
            });
            assert!(r.all_ok(), "({k},{n}) at {e}: {r:?}");
            cov.instances += 1;
            cov.cycle_bound += r.rank_bound_cycle.checked;
            for (c, x) in r.arrow_case_counts {
                *cov.cases.entry(c).or_default() += x;
            }
        }
    }
}

#[test]
fn every_arrow_case_occurs() {
    let mut cov = Coverage::default();
    // the essential vertex sorts last, so the walk from v_1 runs around the
    // cycle and ends next to a: the cycle case with i = l - 1
    let lollipop = from_chains(&[&["z", "b", "c", "d", "z"], &["z", "t", "u"]]);
    sweep(&mut cov, lollipop, &[(2, 3), (3, 4)]);
    // with the essential vertex first, the walk returns to it through e_l
    let lollipop = from_chains(&[&["a", "b", "c", "d", "a"], &["a", "t", "u"]]);
    sweep(&mut cov, lollipop, &[(2, 3)]);
    let spider = from_chains(&[&["c", "a1", "a2"], &["c", "b1", "b2"], &["c", "d1", "d2"]]);
    sweep(&mut cov, spider, &[(2, 3)]);
    sweep(&mut cov, theta(&[2, 2, 3]), &[(3, 4)]);
    // rank gaps of two or more need five points on a long path
    sweep(&mut cov, from_chains(&[&["a", "b", "c", "d", "e", "f"]]), &[(3, 5)]);

    for case in ["A", "B.1", "B.2", "C.1", "C.2", "D.1", "D.2", "D.3"] {
        assert!(cov.cases.get(case).is_some_and(|&c| c > 0), "case {case} never occurred: {:?}", cov.cases);
    }
    assert!(cov.cycle_bound > 0);
    assert!(cov.instances > 0);
}
