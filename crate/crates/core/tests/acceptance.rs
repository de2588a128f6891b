//! Acceptance criteria. Runs without the libtest harness so that the six
//! PASS/FAIL lines always reach the output; exits non-zero on any FAIL.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{battery, brute_force_dconf, kn_pairs, oracle_betti, oracle_y, to_labels, LabelCell};
use nkconfig::cli::barycentric;
use nkconfig::complex::{
    closure_counts, enumerate_dconf, eta_closure, eta_edge, eta_vertex, is_dconf_cell, Cell, ComplexError,
    ComplexView, Coord,
};
use nkconfig::graph::{check_sufficiently_subdivided, cycle, path, star, Graph};
use nkconfig::homology::{betti_numbers, cell_boundary, Betti, Coefficients};
use nkconfig::morse::{
    check_lemmas, check_pairs, inject_fault, morse_betti, pair_external_cells, verify_acyclic,
    verify_critical_subcomplex, FaultKind, Instance, LemmaReport,
};
use nkconfig::subdivision::{fresh_vertex_label, subdivide, SubdivisionContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// pinned limits
const WORKED_INSTANCE_LIMIT: Duration = Duration::from_secs(1);
const HOMOTOPY_TYPE_LIMIT: Duration = Duration::from_secs(1);
const BATTERY_LIMIT: Duration = Duration::from_secs(600);
const BATTERY_MAX_CELLS: usize = 100_000;
const BATTERY_MAX_N: usize = 4;
const STABILIZATION_LEVELS: usize = 3;
const STABILIZATION_FULL_MAX_N: usize = 3;
const STABILIZATION_PARTIAL_BUDGET: usize = 400_000;
const FUZZ_SAMPLES: usize = 10_000;
const FUZZ_SEED: u64 = 0x6e6b_636f_6e66;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn betti_vec(b: &Betti) -> Vec<usize> {
    b.trimmed().to_vec()
}

fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn label_set(cv: &ComplexView) -> BTreeSet<LabelCell> {
    cv.cells().iter().map(|c| to_labels(cv.graph(), c)).collect()
}

// 1. the P4 -> P5 worked instance
fn worked_instance() -> Verdict {
    let start = Instant::now();
    let g = Arc::new(path(&["p", "q", "r", "s"]));
    let ctx = subdivide(&g, "qr", "w").unwrap();
    let cv = enumerate_dconf(ctx.g_sub_arc().clone(), 2, 2, BATTERY_MAX_CELLS).unwrap();
    let cv_g = enumerate_dconf(g.clone(), 2, 2, BATTERY_MAX_CELLS).unwrap();
    let y = ctx.build_y(&cv_g).unwrap();
    let faces = cv.face_table().unwrap();
    let m = pair_external_cells(&cv, &ctx).unwrap();
    let acyclic = verify_acyclic(&cv, &faces, &m).acyclic && verify_critical_subcomplex(&cv, &faces, &m);
    let mut bettis = Vec::new();
    for coeff in [Coefficients::Rational, Coefficients::Mod2] {
        bettis.push(betti_vec(&betti_numbers(&cv, coeff).unwrap().betti));
        bettis.push(betti_vec(&betti_numbers(&y, coeff).unwrap().betti));
        bettis.push(betti_vec(&morse_betti(&cv, &faces, &m, coeff).unwrap()));
    }
    let elapsed = start.elapsed();

    // oracles: brute-force cells, dense exact ranks, deflation product
    let brute = brute_force_dconf(ctx.g_sub(), 2, 2);
    let brute_g: Vec<LabelCell> = brute_force_dconf(&g, 2, 2).into_iter().collect();
    let y_oracle = oracle_y(&g, ctx.g_sub(), "qr", "w", &brute_g);
    let oracle = [
        trim(oracle_betti(ctx.g_sub(), &brute, false)),
        trim(oracle_betti(ctx.g_sub(), &brute, true)),
        trim(oracle_betti(ctx.g_sub(), &y_oracle, false)),
    ];

    let checks = [
        ("cells", cv.len() == 50 && brute.len() == 50),
        ("cells_by_dim", cv.counts() == vec![20, 24, 6]),
        ("Y", y.len() == 34 && y.counts() == vec![16, 16, 2] && label_set(&y) == y_oracle),
        ("external", m.external_count() == 16),
        ("pairs", m.pairs(&cv).len() == 8 && check_pairs(&cv, &ctx, &m).ok),
        ("acyclic", acyclic),
        ("betti", bettis.iter().all(|b| *b == vec![2])),
        ("oracle_betti", oracle.iter().all(|b| *b == vec![2])),
        ("runtime", elapsed < WORKED_INSTANCE_LIMIT),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    verdict(
        failed.is_empty(),
        format!(
            "50 cells (20/24/6), Y 34 (16/16/2), 16 external, 8 pairs, betti (2,0) x6 in {elapsed:?}{}",
            if failed.is_empty() {
                String::new()
            } else {
                format!("; failed: {failed:?}")
            }
        ),
    )
}

// 2. known homotopy types
fn homotopy_types() -> Verdict {
    let cases: [(&str, Graph, usize, usize); 3] = [
        ("DConf^2(C3,2)", cycle(3), 2, 2),
        ("DConf^2(K13,2)", star(3), 2, 2),
        ("DConf^3(edge,3)", path(&["a", "b"]), 3, 3),
    ];
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, g, k, n) in cases {
        let start = Instant::now();
        let cv = enumerate_dconf(Arc::new(g.clone()), k, n, BATTERY_MAX_CELLS).unwrap();
        let q = betti_vec(&betti_numbers(&cv, Coefficients::Rational).unwrap().betti);
        let f2 = betti_vec(&betti_numbers(&cv, Coefficients::Mod2).unwrap().betti);
        let elapsed = start.elapsed();
        let brute = brute_force_dconf(&g, k, n);
        let oq = trim(oracle_betti(&g, &brute, false));
        let of2 = trim(oracle_betti(&g, &brute, true));
        let ok = label_set(&cv) == brute
            && q == vec![1, 1]
            && f2 == vec![1, 1]
            && oq == q
            && of2 == f2
            && elapsed < HOMOTOPY_TYPE_LIMIT;
        pass &= ok;
        notes.push(format!("{name} {q:?} in {elapsed:?}{}", if ok { "" } else { " FAIL" }));
    }
    verdict(pass, notes.join("; "))
}

struct Built {
    ctx: SubdivisionContext,
    cv: ComplexView,
    cv_g: ComplexView,
}

fn build(g: &Arc<Graph>, edge: &str, k: usize, n: usize) -> Result<Built, ComplexError> {
    let w = fresh_vertex_label(g);
    let ctx = subdivide(g, edge, &w).unwrap();
    let cv = enumerate_dconf(ctx.g_sub_arc().clone(), k, n, BATTERY_MAX_CELLS)?;
    let cv_g = enumerate_dconf(g.clone(), k, n, BATTERY_MAX_CELLS)?;
    Ok(Built { ctx, cv, cv_g })
}

fn sufficient_instances() -> Vec<(String, Arc<Graph>, usize, usize)> {
    let mut out = Vec::new();
    for (name, g) in battery() {
        for (k, n) in kn_pairs(BATTERY_MAX_N) {
            if check_sufficiently_subdivided(&g, k, n).unwrap().ok {
                out.push((name.clone(), Arc::new(g.clone()), k, n));
            }
        }
    }
    out
}

fn edge_labels(g: &Graph) -> Vec<String> {
    let mut v: Vec<String> = g.edge_ids().map(|e| g.edge_label(e).to_string()).collect();
    v.sort();
    v
}

#[derive(Default)]
struct LemmaTotals {
    checked: usize,
    violations: usize,
    cycle_bound_checked: usize,
    const_diff_skipped: usize,
    cases: std::collections::BTreeMap<String, usize>,
    first: Option<String>,
}

impl LemmaTotals {
    fn add(&mut self, r: &LemmaReport, at: &str) {
        for t in [
            &r.toggle_entry,
            &r.rank_bound,
            &r.rank_bound_cycle,
            &r.face_stability,
            &r.field_well_defined,
            &r.arrow_cases,
            &r.const_rank,
            &r.const_diff,
        ] {
            self.checked += t.checked;
            self.violations += t.violations;
            if let (None, Some(v)) = (&self.first, &t.first_violation) {
                self.first = Some(format!("{at}: {v}"));
            }
        }
        self.cycle_bound_checked += r.rank_bound_cycle.checked;
        self.const_diff_skipped += r.const_diff_skipped as usize;
        for (c, n) in &r.arrow_case_counts {
            *self.cases.entry(c.clone()).or_default() += n;
        }
    }
}

// 3. invariant suite and 6. fault injection, over the same instances
fn battery_sweep() -> (Verdict, Verdict) {
    let start = Instant::now();
    let (mut instances, mut skipped, mut failures) = (0, 0, Vec::new());
    let mut lemmas = LemmaTotals::default();
    let (mut faults, mut caught, mut unpaired) = (0, 0, 0);
    let mut missed = Vec::new();
    for (name, g, k, n) in sufficient_instances() {
        for edge in edge_labels(&g) {
            let at = format!("{name} ({k},{n}) @{edge}");
            let b = match build(&g, &edge, k, n) {
                Ok(b) => b,
                Err(ComplexError::BudgetExceeded { .. }) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => panic!("{at}: {e}"),
            };
            instances += 1;
            let (ctx, cv) = (&b.ctx, &b.cv);
            let faces = cv.face_table().unwrap();
            let m = pair_external_cells(cv, ctx).unwrap();

            let cells_g: Vec<LabelCell> = label_set(&b.cv_g).into_iter().collect();
            let w = ctx.g_sub().vertex_label(ctx.w()).to_string();
            let y = oracle_y(&g, ctx.g_sub(), &edge, &w, &cells_g);
            let critical: BTreeSet<LabelCell> = m.critical().iter().map(|&i| to_labels(ctx.g_sub(), cv.cell(i))).collect();
            let external_ok = (0..cv.len()).all(|i| {
                let in_y = y.contains(&to_labels(ctx.g_sub(), cv.cell(i)));
                m.is_external(i) != in_y && (m.is_external(i) == m.mate(i).is_some())
            });
            let pairs = check_pairs(cv, ctx, &m);
            let acyc = verify_acyclic(cv, &faces, &m);
            let closed = verify_critical_subcomplex(cv, &faces, &m);
            let rep = check_lemmas(&Instance {
                cv,
                ctx,
                faces: &faces,
                matching: &m,
            });
            lemmas.add(&rep, &at);
            let checks = [
                ("perfect matching on external cells", external_ok && m.external_count() == 2 * pairs.pairs),
                ("critical = Y", critical == y),
                ("critical face-closed", closed),
                ("acyclic (alternating)", acyc.alternating_ok),
                ("acyclic (topological)", acyc.topological_ok),
                ("pair coherence", pairs.ok),
                ("lemmas", rep.all_ok()),
            ];
            for (what, ok) in checks {
                if !ok {
                    failures.push(format!("{at}: {what}"));
                }
            }

            for kind in FaultKind::ALL {
                for which in [0, m.pairs(cv).len() / 2] {
                    let Some(bad) = inject_fault(cv, &faces, &m, kind, which) else {
                        unpaired += 1;
                        continue;
                    };
                    faults += 1;
                    let detected = !check_pairs(cv, ctx, &bad).ok
                        || !verify_critical_subcomplex(cv, &faces, &bad)
                        || !verify_acyclic(cv, &faces, &bad).acyclic;
                    if detected {
                        caught += 1;
                    } else {
                        missed.push(format!("{at}: {kind:?}/{which}"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass3 = failures.is_empty() && lemmas.violations == 0 && elapsed < BATTERY_LIMIT && instances > 0;
    let d3 = format!(
        "{instances} instances ({skipped} over {BATTERY_MAX_CELLS} cells skipped), {} lemma checks, {} violations, \
         cycle-case rank bound checked {}x, const-diff skipped on {}, arrow cases {:?}, {elapsed:?}{}{}",
        lemmas.checked,
        lemmas.violations,
        lemmas.cycle_bound_checked,
        lemmas.const_diff_skipped,
        lemmas.cases,
        failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default(),
        lemmas.first.map(|f| format!("; first violation {f}")).unwrap_or_default(),
    );
    let pass6 = missed.is_empty() && faults > 0;
    let d6 = format!(
        "{caught}/{faults} corrupted matchings detected on {instances} instances ({unpaired} fault sites without pairs){}",
        missed.first().map(|f| format!("; missed {f}")).unwrap_or_default()
    );
    (verdict(pass3, d3), verdict(pass6, d6))
}

// 4. stabilization over barycentric subdivisions
fn stabilization() -> Verdict {
    let mut notes = Vec::new();
    let (mut runs, mut full_runs, mut partial) = (0, 0, 0);
    let mut pass = true;
    for (name, g) in battery() {
        for (k, n) in kn_pairs(BATTERY_MAX_N) {
            let budget = if n <= STABILIZATION_FULL_MAX_N {
                usize::MAX
            } else {
                STABILIZATION_PARTIAL_BUDGET
            };
            let mut cur = g.clone();
            let mut first_sufficient = None;
            let mut reference: Option<Betti> = None;
            let mut levels = 0;
            for j in 0..=STABILIZATION_LEVELS {
                if j > 0 {
                    cur = barycentric(&cur).unwrap();
                }
                let cv = match enumerate_dconf(Arc::new(cur.clone()), k, n, budget) {
                    Ok(cv) => cv,
                    Err(ComplexError::BudgetExceeded { .. }) => break,
                    Err(e) => panic!("{name}: {e}"),
                };
                levels = j + 1;
                let b = betti_numbers(&cv, Coefficients::Rational).unwrap().betti;
                if first_sufficient.is_none() && check_sufficiently_subdivided(&cur, k, n).unwrap().ok {
                    first_sufficient = Some(j);
                }
                if first_sufficient.is_some() {
                    match &reference {
                        None => reference = Some(b),
                        Some(r) if *r != b => {
                            pass = false;
                            notes.push(format!("{name} ({k},{n}) changes at B_{j}"));
                        }
                        Some(_) => {}
                    }
                }
            }
            runs += 1;
            if levels == STABILIZATION_LEVELS + 1 {
                full_runs += 1;
            } else {
                partial += 1;
            }
            if n <= STABILIZATION_FULL_MAX_N && (levels != STABILIZATION_LEVELS + 1 || first_sufficient.is_none()) {
                pass = false;
                notes.push(format!("{name} ({k},{n}) never sufficient through B_{STABILIZATION_LEVELS}"));
            }
        }
    }
    verdict(
        pass,
        format!(
            "{runs} (graph, k, n) runs; {full_runs} through B_{STABILIZATION_LEVELS}, {partial} with n=4 stopped at {STABILIZATION_PARTIAL_BUDGET} cells{}",
            if notes.is_empty() {
                String::new()
            } else {
                format!("; {}", notes.join("; "))
            }
        ),
    )
}

fn random_tuple(g: &Graph, n: usize, rng: &mut ChaCha8Rng) -> Cell {
    let (nv, ne) = (g.vertex_count(), g.edge_count());
    Cell::new(
        (0..n)
            .map(|_| {
                let r = rng.gen_range(0..nv + ne);
                if r < nv {
                    Coord::Vertex(nkconfig::graph::VertexId(r as u32))
                } else {
                    Coord::Edge(nkconfig::graph::EdgeId((r - nv) as u32))
                }
            })
            .collect(),
    )
}

fn boundary_squared_vanishes(g: &Graph, x: &Cell) -> (bool, bool) {
    let mut acc: std::collections::BTreeMap<Cell, i64> = Default::default();
    for (f, c) in cell_boundary(g, x) {
        for (ff, cc) in cell_boundary(g, &f) {
            *acc.entry(ff).or_default() += c * cc;
        }
    }
    (acc.values().all(|&v| v == 0), acc.values().all(|&v| v % 2 == 0))
}

// 5. fuzzed structural identities
fn fuzz() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(FUZZ_SEED);
    let mut violations: Vec<String> = Vec::new();
    let (mut instances, mut samples) = (0, 0);
    for (name, g, k, n) in sufficient_instances() {
        let edge = edge_labels(&g).remove(0);
        let Ok(b) = build(&g, &edge, k, n) else { continue };
        instances += 1;
        let (ctx, g2) = (&b.ctx, b.ctx.g_sub());
        let ends = common::edge_ends_of(g2);
        let a = ctx.a();
        let mut bad = |what: &str, x: &Cell| {
            if violations.len() < 5 {
                violations.push(format!("{name} ({k},{n}) {what} at {}", x.key(g2)));
            }
        };
        for _ in 0..FUZZ_SAMPLES {
            samples += 1;
            // arbitrary cells of (G')^n
            let x = random_tuple(g2, n, &mut rng);
            let total: usize = g2.vertex_ids().map(|v| eta_vertex(&x, v)).sum::<usize>()
                + g2.edge_ids().map(|e| eta_edge(&x, e)).sum::<usize>();
            if total != n {
                bad("partition identity", &x);
            }
            let labels = to_labels(g2, &x);
            let counts = closure_counts(g2, &x);
            for v in g2.vertex_ids() {
                let direct = eta_vertex(&x, v)
                    + g2.edge_ids().filter(|&e| g2.ends(e).contains(&v)).map(|e| eta_edge(&x, e)).sum::<usize>();
                let scanned = common::closure_count(&ends, &labels, g2.vertex_label(v));
                if eta_closure(g2, &x, v) != direct || direct != scanned || counts[v.index()] != direct {
                    bad("closure identity", &x);
                }
            }
            if x.dim() > 0 {
                let (z, f2) = boundary_squared_vanishes(g2, &x);
                if !z || !f2 {
                    bad("boundary squared", &x);
                }
            }
            // cells of DConf^k(G', n)
            let y = b.cv.cell(rng.gen_range(0..b.cv.len()));
            if ctx.external_by_inflation(y, k) != ctx.external_by_counts(y, k) {
                bad("external tests disagree", y);
            }
            // cells of DConf^k(G, n)
            let z = b.cv_g.cell(rng.gen_range(0..b.cv_g.len()));
            let defl = ctx.deflate(z, k).unwrap();
            let want = 5usize.pow(eta_edge(z, a) as u32);
            if defl.len() != want || !defl.iter().all(|c| is_dconf_cell(g2, k, c)) {
                bad("deflation size", z);
            }
        }
    }
    verdict(
        violations.is_empty() && instances > 0,
        format!(
            "{instances} instances x {FUZZ_SAMPLES} samples ({samples} total, each: arbitrary tuple, DConf(G') cell, DConf(G) cell), {} violation(s){}",
            violations.len(),
            violations.first().map(|v| format!("; first {v}")).unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |n: usize, title: &str, v: Verdict| {
        all &= v.pass;
        println!("{} criterion {n} ({title}): {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    };
    report(1, "P4 -> P5 worked instance", worked_instance());
    report(2, "known homotopy types", homotopy_types());
    let (c3, c6) = battery_sweep();
    report(3, "invariant suite over the battery", c3);
    report(4, "stabilization under barycentric subdivision", stabilization());
    report(5, "fuzzed structural identities", fuzz());
    report(6, "fault injection", c6);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
