//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use lgraph::graph::{all_stacking_graphs, random_planar_3tree, random_stacking_graph, random_triangulation, PlaneGraph};
use lgraph::io::{graph_json, to_json};
use lgraph::labeling::{labeling_from_realizer, two_canonical_from_labeling, EdgeLabeling, TwoCanonicalOrder};
use lgraph::lift3d::{
    canonical_lift, classify, heights_from_canonical, lift_cuboids, validate_cuboids, Box3, Touch,
};
use lgraph::lrep::{
    base_shapes, build_lrep, complete_to_triangulation, equilateralize_stepwise, induced_labeling, validate_lrep,
    LRepresentation, LShape,
};
use lgraph::rational::{q, Q};
use lgraph::recognition::{oracle_two_canonical, recognize, test_base_edge};
use lgraph::schnyder::{canonical_order_from_realizer, compute_realizer, delete_green, Color, SchnyderRealizer};
use lgraph::sl::{
    build_segment_system, cubes_from_sl, felsner_iterate, homothetic_triangles, validate_sl,
    visibility_flow_check, SLOutcome, FLOAT_RESIDUAL,
};

struct Verdict {
    failures: Vec<String>,
    summary: String,
}

impl Verdict {
    fn new() -> Self {
        Verdict { failures: Vec::new(), summary: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn report(id: usize, title: &str, v: &Verdict, took: Duration, limit: Option<Duration>) -> bool {
    let late = limit.is_some_and(|l| took > l);
    let ok = v.failures.is_empty() && !late;
    let limit_text = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
    println!(
        "criterion {id} {}: {title}; {}; {:.2}s{limit_text}",
        if ok { "PASS" } else { "FAIL" },
        v.summary,
        took.as_secs_f64()
    );
    for f in v.failures.iter().take(5) {
        println!("    {f}");
    }
    if v.failures.len() > 5 {
        println!("    ... {} more", v.failures.len() - 5);
    }
    if late {
        println!("    runtime limit exceeded");
    }
    ok
}

/// The triangulation corpus: 200 seeded instances with n in [4, 60].
fn corpus() -> Vec<(usize, u64, SchnyderRealizer)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let sizes: Vec<usize> = (0..200).map(|_| rng.gen_range(4..=60)).collect();
    sizes
        .into_par_iter()
        .enumerate()
        .map(|(i, n)| {
            let h = random_triangulation(n, i as u64);
            (n, i as u64, compute_realizer(&h, [0, 1, n - 1]).expect("realizer"))
        })
        .collect()
}

struct Built {
    r: SchnyderRealizer,
    labeling: EdgeLabeling,
    rep: LRepresentation,
}

fn criterion1(corpus: &[(usize, u64, SchnyderRealizer)]) -> (Verdict, Vec<Built>) {
    let mut v = Verdict::new();
    let results: Vec<Result<Built, String>> = corpus
        .par_iter()
        .map(|(n, seed, r)| {
            let tag = format!("n={n} seed={seed}");
            let g = delete_green(r);
            let el = labeling_from_realizer(r).map_err(|e| format!("{tag}: labeling {e}"))?;
            let o = two_canonical_from_labeling(&el).map_err(|e| format!("{tag}: order {e}"))?;
            let rep = build_lrep(el.host(), &o).map_err(|e| format!("{tag}: build {e}"))?;
            if !rep.host().same_edge_set(&g) {
                return Err(format!("{tag}: host differs from H minus Sn"));
            }
            let report = validate_lrep(&rep);
            if !report.is_ok() {
                return Err(format!("{tag}: {report}"));
            }
            let induced = induced_labeling(&rep).map_err(|e| format!("{tag}: induced {e}"))?;
            if !induced.same_arcs(&el) {
                return Err(format!("{tag}: induced labeling differs"));
            }
            Ok(Built { r: r.clone(), labeling: el, rep })
        })
        .collect();
    let mut built = Vec::new();
    for x in results {
        match x {
            Ok(b) => built.push(b),
            Err(e) => v.failures.push(e),
        }
    }
    v.summary = format!("{}/{} round trips exact", built.len(), corpus.len());
    (v, built)
}

fn criterion2(built: &[Built]) -> (Verdict, Vec<LRepresentation>) {
    let mut v = Verdict::new();
    let [b1, b2] = base_shapes();
    v.check(
        b1 == LShape::from_ints([1, 2], [4, -1]) && b2 == LShape::from_ints([3, -1], [5, -3]),
        || "base shapes differ from the stated coordinates".into(),
    );
    v.check(b1.leg() == Some(q(3)) && b2.leg() == Some(q(2)), || "base legs are not 3 and 2".into());
    let results: Vec<Result<LRepresentation, String>> = built
        .par_iter()
        .map(|b| {
            let n = b.r.host().n();
            let (eq, steps) = equilateralize_stepwise(&b.rep).map_err(|e| format!("n={n}: {e}"))?;
            if let Some(s) = eq.shapes().iter().position(|s| s.vertical_len() != s.horizontal_len()) {
                return Err(format!("n={n}: shape {s} has unequal legs"));
            }
            if let Some(i) = steps.iter().position(|&x| !x) {
                return Err(format!("n={n}: invariant line misses a segment interior after insertion {i}"));
            }
            let report = validate_lrep(&eq);
            if !report.is_ok() {
                return Err(format!("n={n}: {report}"));
            }
            if !induced_labeling(&eq).map_err(|e| e.to_string())?.same_arcs(&b.labeling) {
                return Err(format!("n={n}: labeling changed"));
            }
            Ok(eq)
        })
        .collect();
    let mut out = Vec::new();
    for x in results {
        match x {
            Ok(e) => out.push(e),
            Err(e) => v.failures.push(e),
        }
    }
    let bits = out
        .iter()
        .flat_map(|r| r.shapes().iter().map(|s| s.top[1].denom().bits()))
        .max()
        .unwrap_or(0);
    v.summary = format!("{}/{} equilateral, base shapes verbatim, largest denominator {bits} bits", out.len(), built.len());
    (v, out)
}

fn qq(a: i64, b: i64) -> [Q; 2] {
    [q(a), q(b)]
}

fn criterion3(eqs: &[LRepresentation]) -> Verdict {
    let mut v = Verdict::new();
    let g = PlaneGraph::from_edges(2, &[[0, 1]]).unwrap();
    let rep = build_lrep(&g, &TwoCanonicalOrder { order: vec![0, 1], base_edge: [0, 1] }).unwrap();
    let (_, r) = complete_to_triangulation(&rep).unwrap();
    let h = heights_from_canonical(&canonical_order_from_realizer(&r));
    let worked = lift_cuboids(&rep, &r, &h).map(|c| c.boxes().to_vec());
    let want = vec![
        Box3 { x: qq(1, 4), y: qq(-1, 2), z: qq(-4, -1) },
        Box3 { x: qq(3, 5), y: qq(-3, -1), z: qq(-4, -2) },
        Box3 { x: qq(1, 3), y: qq(-3, -1), z: qq(-4, -3) },
    ];
    v.check(worked.as_ref() == Ok(&want), || format!("worked lift differs: {worked:?}"));
    let errs: Vec<String> = eqs
        .par_iter()
        .filter_map(|eq| {
            let n = eq.host().n() + 1;
            let (cr, r) = match canonical_lift(eq) {
                Ok(x) => x,
                Err(e) => return Some(format!("n={n}: {e}")),
            };
            let h = heights_from_canonical(&canonical_order_from_realizer(&r));
            if h.h.iter().enumerate().any(|(i, x)| cr.boxes()[i].z[1] != *x) {
                return Some(format!("n={n}: heights are not -i along the canonical order"));
            }
            let report = validate_cuboids(&cr);
            if !report.is_ok() {
                return Some(format!("n={n}: {report}"));
            }
            if !cr.proper() {
                return Some(format!("n={n}: improper contact"));
            }
            if !cr.boxes().iter().all(Box3::has_square_base) {
                return Some(format!("n={n}: base not square"));
            }
            None
        })
        .collect();
    v.failures.extend(errs);
    v.summary = format!("{} lifts proper with square bases, worked lift exact", eqs.len());
    v
}

fn ordered_edges(g: &PlaneGraph) -> Vec<[usize; 2]> {
    g.edges().iter().flat_map(|&[u, v]| [[u, v], [v, u]]).collect()
}

fn archive_dir() -> PathBuf {
    let target = std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target"));
    target.join("acceptance")
}

fn criterion4() -> Verdict {
    let mut v = Verdict::new();
    let mut family: Vec<PlaneGraph> = (2..=7).flat_map(all_stacking_graphs).collect();
    let exhaustive = family.len();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..500 {
        let n = rng.gen_range(3..=9);
        family.push(random_stacking_graph(n, 10_000 + i));
    }
    let rows: Vec<(Vec<String>, bool, usize)> = family
        .par_iter()
        .map(|g| {
            let mut errs = Vec::new();
            let mut any = false;
            let mut edges_checked = 0;
            for e in ordered_edges(g) {
                edges_checked += 1;
                let oracle = match oracle_two_canonical(g, e) {
                    Ok(o) => o,
                    Err(err) => {
                        errs.push(format!("{:?}: oracle {err}", g.edges()));
                        continue;
                    }
                };
                let found = test_base_edge(g, e);
                any |= !oracle.is_empty();
                if found.is_ok() != !oracle.is_empty() {
                    errs.push(format!("{:?} base {e:?}: recognition {} oracle {}", g.edges(), found.is_ok(), oracle.len()));
                }
                if let Ok(o) = found {
                    match build_lrep(g, &o) {
                        Ok(rep) if validate_lrep(&rep).is_ok() => {}
                        _ => errs.push(format!("{:?} base {e:?}: witness does not build", g.edges())),
                    }
                }
            }
            if recognize(g).is_some() != any {
                errs.push(format!("{:?}: recognize disagrees with the oracle", g.edges()));
            }
            (errs, any, edges_checked)
        })
        .collect();
    let mut negatives = Vec::new();
    let mut checked = 0;
    for (g, (errs, any, k)) in family.iter().zip(rows) {
        v.failures.extend(errs);
        checked += k;
        if !any {
            negatives.push(g);
        }
    }
    let k4 = PlaneGraph::from_edges(4, &[[0, 1], [1, 2], [0, 2], [0, 3], [1, 3], [2, 3]]).unwrap();
    v.check(recognize(&k4).is_none(), || "K4 accepted".into());
    let diamond = PlaneGraph::from_edges(4, &[[0, 1], [0, 2], [1, 2], [0, 3], [1, 3]]).unwrap();
    v.check(recognize(&diamond).is_some(), || "diamond rejected".into());
    // Smallest negative first; it is the archived counterexample.
    negatives.sort_by_key(|g| (g.n(), g.edges().to_vec()));
    match negatives.first() {
        None => v.failures.push("no oracle-certified negative instance".into()),
        Some(g) => {
            let dir = archive_dir();
            let written = std::fs::create_dir_all(&dir).and_then(|_| {
                std::fs::write(dir.join("negative.json"), graph_json(g))?;
                let orders: Vec<serde_json::Value> = ordered_edges(g)
                    .into_iter()
                    .map(|e| serde_json::json!({ "base_edge": e, "orders": 0 }))
                    .collect();
                std::fs::write(
                    dir.join("negative.oracle.json"),
                    to_json(&serde_json::json!({ "lgraph": false, "base_edges": orders })),
                )
            });
            v.check(written.is_ok(), || format!("archiving failed: {written:?}"));
        }
    }
    v.summary = format!(
        "{} graphs ({exhaustive} exhaustive up to 7 vertices, 500 random), {checked} ordered base edges agree, {} negatives, smallest archived to target/acceptance/negative.json",
        family.len(),
        negatives.len()
    );
    v
}

fn hand_k4() -> (LRepresentation, SchnyderRealizer) {
    let r = compute_realizer(&random_triangulation(4, 0), [0, 1, 3]).unwrap();
    let g = delete_green(&r);
    let shapes = vec![
        LShape::from_ints([0, 3], [3, 0]),
        LShape::from_ints([2, 0], [4, -2]),
        LShape::from_ints([1, 0], [2, -1]),
    ];
    (LRepresentation::new(g, [0, 1], shapes).unwrap(), r)
}

/// Exact solutions of the converged runs, kept for the flow criterion.
type ExactRuns = Vec<(String, lgraph::sl::SegmentSystem, Vec<Q>)>;

fn criterion5() -> (Verdict, ExactRuns) {
    let mut v = Verdict::new();
    let mut exact: ExactRuns = Vec::new();
    let (hand, r) = hand_k4();
    let sizes: Vec<Option<Q>> = hand.shapes().iter().map(LShape::leg).collect();
    v.check(sizes == vec![Some(q(3)), Some(q(2)), Some(q(1))], || format!("hand sizes {sizes:?}"));
    let report = validate_sl(&hand, &r);
    v.check(report.is_ok(), || format!("hand K4: {report}"));
    match felsner_iterate(r.host(), &r, 50) {
        Ok(SLOutcome::Converged(run)) => {
            v.check(run.trace.len() == 1, || format!("K4 took {} solves", run.trace.len()));
            v.check(run.solution.all_positive(), || "K4 solution not positive".into());
            exact.push(("K4".into(), run.system.clone(), run.solution.values.clone()));
        }
        other => v.failures.push(format!("K4 did not converge: {:?}", other.map(|o| o.trace().len()))),
    }
    match homothetic_triangles(&hand, &r) {
        Ok(tr) => v.check(tr.triangles().iter().all(|t| t.is_homothetic_copy()), || "triangle not homothetic".into()),
        Err(e) => v.failures.push(format!("hand triangles: {e}")),
    }
    match cubes_from_sl(&hand, &r) {
        Ok(cr) => {
            v.check(cr.boxes().iter().all(Box3::is_cube), || "K4 box is not a cube".into());
            let b = cr.boxes();
            for x in 0..b.len() {
                for y in x + 1..b.len() {
                    let t = classify(&b[x], &b[y]);
                    v.check(t == Touch::Face || t == Touch::Lower, || format!("K4 cubes {x},{y}: {t:?}"));
                }
            }
        }
        Err(e) => v.failures.push(format!("K4 cubes: {e}")),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let jobs: Vec<(usize, u64)> = (0..100).map(|i| (rng.gen_range(4..=12), 500 + i)).collect();
    let runs: Vec<(String, Result<SLOutcome, String>)> = jobs
        .par_iter()
        .map(|&(n, seed)| {
            let h = random_planar_3tree(n, seed);
            let tag = format!("3-tree n={n} seed={seed}");
            let out = compute_realizer(&h, [0, 1, n - 1])
                .and_then(|r| felsner_iterate(&h, &r, 50))
                .map_err(|e| e.to_string());
            (tag, out)
        })
        .collect();
    let (mut converged, mut nonterm, mut float) = (0, 0, 0);
    for (tag, out) in runs {
        match out {
            Err(e) => v.failures.push(format!("{tag}: {e}")),
            Ok(SLOutcome::NonTermination { trace }) => {
                nonterm += 1;
                println!("    {tag}: no positive solution after {} solves", trace.len());
                for t in &trace {
                    println!("      {} {} {} min {}", t.iteration, t.realizer_hash, t.sign_pattern, t.min_entry);
                }
            }
            Ok(SLOutcome::Converged(run)) => {
                converged += 1;
                if run.solution.exact {
                    let mut report = validate_lrep(&run.rep);
                    report.merge(validate_sl(&run.rep, &run.realizer));
                    v.check(report.is_ok(), || format!("{tag}: {report}"));
                    match (homothetic_triangles(&run.rep, &run.realizer), cubes_from_sl(&run.rep, &run.realizer)) {
                        (Ok(_), Ok(c)) => v.check(c.boxes().iter().all(Box3::is_cube), || format!("{tag}: not cubes")),
                        (a, b) => v.failures.push(format!("{tag}: {:?} {:?}", a.err(), b.err())),
                    }
                    exact.push((tag, run.system, run.solution.values));
                } else {
                    float += 1;
                    v.check(run.solution.residual <= FLOAT_RESIDUAL, || format!("{tag}: residual {}", run.solution.residual));
                }
            }
        }
    }
    v.summary = format!(
        "hand K4 is SL, K4 converges in 1 solve; 3-trees: {converged} converged ({float} approximate), {nonterm} reported without convergence"
    );
    (v, exact)
}

fn criterion6(corpus: &[(usize, u64, SchnyderRealizer)]) -> Verdict {
    let mut v = Verdict::new();
    let extra: Vec<SchnyderRealizer> = (0..50)
        .map(|s| {
            let n = 4 + s as usize % 30;
            compute_realizer(&random_planar_3tree(n, s), [0, 1, n - 1]).unwrap()
        })
        .collect();
    let all: Vec<&SchnyderRealizer> = corpus.iter().map(|(_, _, r)| r).chain(&extra).collect();
    for r in &all {
        let co = canonical_order_from_realizer(r);
        let mut pos = vec![usize::MAX; r.host().n()];
        for (i, &x) in co.order.iter().enumerate() {
            pos[x] = i;
        }
        for a in r.arcs() {
            // S1 and S2 point to earlier vertices, Sn reversed points to later ones.
            let ok = match a.color {
                Color::Green => pos[a.tail] < pos[a.head],
                _ => pos[a.head] < pos[a.tail],
            };
            v.check(ok, || format!("n={}: arc {}->{} ({:?}) against the order", r.host().n(), a.tail, a.head, a.color));
        }
    }
    v.summary = format!("{} realizers, every arc of S1, S2 and reversed Sn respects the order", all.len());
    v
}

fn criterion7(exact: &ExactRuns) -> Verdict {
    let mut v = Verdict::new();
    for (tag, s, x) in exact {
        let report = visibility_flow_check(s, x);
        v.check(report.is_ok(), || format!("{tag}: {report}"));
        let rebuilt = build_segment_system(s.realizer().host(), s.realizer()).map(|t| t.unknowns());
        v.check(rebuilt == Ok(s.unknowns()), || format!("{tag}: system not reproducible"));
    }
    v.summary = format!("{} exact SL solutions conserve flow at every inner node", exact.len());
    v
}

fn main() {
    let mut all = true;

    let t = Instant::now();
    let corpus = corpus();
    let (v1, built) = criterion1(&corpus);
    all &= report(1, "realizer to L-representation round trip", &v1, t.elapsed(), Some(Duration::from_secs(30)));

    let t = Instant::now();
    let (v2, eqs) = criterion2(&built);
    all &= report(2, "equilateral representations", &v2, t.elapsed(), Some(Duration::from_secs(60)));

    let t = Instant::now();
    let v3 = criterion3(&eqs);
    all &= report(3, "square-based cuboid lifts", &v3, t.elapsed(), Some(Duration::from_secs(60)));

    let t = Instant::now();
    let v4 = criterion4();
    all &= report(4, "recognition agrees with the oracle", &v4, t.elapsed(), Some(Duration::from_secs(120)));

    let t = Instant::now();
    let (v5, exact) = criterion5();
    all &= report(5, "SL representations, triangles and cubes", &v5, t.elapsed(), Some(Duration::from_secs(120)));

    let t = Instant::now();
    let v6 = criterion6(&corpus);
    all &= report(6, "canonical orders are topological", &v6, t.elapsed(), None);

    let t = Instant::now();
    let v7 = criterion7(&exact);
    all &= report(7, "flow conservation of SL solutions", &v7, t.elapsed(), None);

    if !all {
        std::process::exit(1);
    }
}
