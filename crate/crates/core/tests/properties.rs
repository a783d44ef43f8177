use proptest::prelude::*;

use lgraph::graph::{degeneracy_order, random_planar_3tree, random_stacking_graph, random_triangulation, PlaneGraph};
use lgraph::io::{from_json, graph_json, load_graph, to_json, RepDoc};
use lgraph::labeling::{
    labeling_from_realizer, two_canonical_from_labeling, validate_labeling, validate_two_canonical,
    validate_two_canonical_abstract, EdgeLabeling,
};
use lgraph::lift3d::{canonical_lift, classify, heights_from_canonical, validate_cuboids, validate_heights, Box3, Touch};
use lgraph::lrep::{build_lrep, equilateralize_stepwise, induced_labeling, validate_lrep, LRepresentation};
use lgraph::rational::{format_q, parse_q, qf, Q};
use lgraph::recognition::{oracle_exists, precedence_orientation, recognize, test_base_edge};
use lgraph::schnyder::{
    canonical_order_from_realizer, compute_realizer, delete_green, is_topological, validate_canonical_order,
    validate_realizer, Color, SchnyderRealizer,
};
use lgraph::sl::{
    build_segment_system, collinearity_report, cubes_from_sl, felsner_iterate, homothetic_triangles,
    paired_segment_report, solve_segment_system, validate_sl, SLOutcome,
};

fn realizer(n: usize, seed: u64) -> SchnyderRealizer {
    compute_realizer(&random_triangulation(n, seed), [0, 1, n - 1]).unwrap()
}

fn rep_of(r: &SchnyderRealizer) -> (EdgeLabeling, LRepresentation) {
    let el = labeling_from_realizer(r).unwrap();
    let o = two_canonical_from_labeling(&el).unwrap();
    let rep = build_lrep(el.host(), &o).unwrap();
    (el, rep)
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        p.swap(i, (s >> 33) as usize % (i + 1));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn triangulations_are_maximal(n in 3usize..40, seed in any::<u64>()) {
        let g = random_triangulation(n, seed);
        prop_assert_eq!(g.m(), 3 * n - 6);
        prop_assert!(g.faces().iter().all(|f| f.len() == 3));
        prop_assert_eq!(g.outer_face().len(), 3);
    }

    #[test]
    fn graph_json_round_trips(n in 3usize..30, seed in any::<u64>()) {
        for g in [random_triangulation(n, seed), random_stacking_graph(n, seed)] {
            prop_assert_eq!(load_graph(&graph_json(&g)).unwrap(), g);
        }
    }

    #[test]
    fn degeneracy_orders_recount(n in 3usize..30, seed in any::<u64>()) {
        for g in [random_triangulation(n, seed), random_stacking_graph(n, seed)] {
            for k in 2..=5 {
                if let Some(o) = degeneracy_order(&g, k) {
                    prop_assert_eq!(o.recount(&g), (true, o.maximal));
                }
            }
        }
    }

    #[test]
    fn rationals_round_trip(a in any::<i64>(), b in 1i64..i64::MAX) {
        let x = qf(a, b);
        prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }

    #[test]
    fn canonical_orders_are_valid_and_topological(n in 4usize..40, seed in any::<u64>()) {
        let r = realizer(n, seed);
        prop_assert!(validate_realizer(&r).is_ok());
        let co = canonical_order_from_realizer(&r);
        prop_assert!(validate_canonical_order(r.host(), &co).is_ok());
        prop_assert!(is_topological(&r, &co.order));
        prop_assert_eq!(delete_green(&r).m(), 2 * n - 5);
    }

    #[test]
    fn labeling_round_trip(n in 4usize..40, seed in any::<u64>()) {
        let r = realizer(n, seed);
        let (el, rep) = rep_of(&r);
        prop_assert!(validate_labeling(&el).is_ok());
        let o = two_canonical_from_labeling(&el).unwrap();
        prop_assert_eq!(o.order.len(), el.host().n());
        prop_assert!(validate_two_canonical(el.host(), &o).is_ok());
        prop_assert!(validate_lrep(&rep).is_ok());
        let again = induced_labeling(&rep).unwrap();
        prop_assert!(again.same_arcs(&el));
        // Fixpoint: rebuilding from the induced labeling keeps it.
        let o2 = two_canonical_from_labeling(&again).unwrap();
        prop_assert!(induced_labeling(&build_lrep(again.host(), &o2).unwrap()).unwrap().same_arcs(&el));
    }

    #[test]
    fn outer_path_ends_point_at_the_base(n in 4usize..40, seed in any::<u64>()) {
        let r = realizer(n, seed);
        let el = labeling_from_realizer(&r).unwrap();
        let g = el.host();
        let [v1, v2] = el.base_edge();
        let f = g.outer_face();
        let k = f.len();
        let i1 = f.iter().position(|&v| v == v1).unwrap();
        let i2 = f.iter().position(|&v| v == v2).unwrap();
        // The outer path runs from v1 to v2 around the face, away from the base edge.
        let (x1, xk) = if f[(i1 + 1) % k] == v2 {
            (f[(i1 + k - 1) % k], f[(i2 + 1) % k])
        } else {
            (f[(i1 + 1) % k], f[(i2 + k - 1) % k])
        };
        let a = el.arc_between(x1, v1).unwrap();
        prop_assert!(a.tail == x1 && a.color == Color::Red);
        let b = el.arc_between(xk, v2).unwrap();
        prop_assert!(b.tail == xk && b.color == Color::Blue);
    }

    #[test]
    fn equilateral_invariants(n in 4usize..30, seed in any::<u64>()) {
        let (el, rep) = rep_of(&realizer(n, seed));
        let (eq, steps) = equilateralize_stepwise(&rep).unwrap();
        prop_assert!(eq.shapes().iter().all(|s| s.vertical_len() == s.horizontal_len()));
        prop_assert!(validate_lrep(&eq).is_ok());
        prop_assert!(induced_labeling(&eq).unwrap().same_arcs(&el));
        prop_assert!(steps.iter().all(|&b| b));
        let text = to_json(&RepDoc::from_rep(&eq));
        let back = from_json::<RepDoc>(&text).unwrap().to_rep().unwrap();
        prop_assert_eq!(validate_lrep(&back), validate_lrep(&eq));
    }

    #[test]
    fn canonical_lift_is_proper(n in 4usize..25, seed in any::<u64>()) {
        let r = realizer(n, seed);
        let (_, rep) = rep_of(&r);
        let (eq, _) = equilateralize_stepwise(&rep).unwrap();
        let (cr, r2) = canonical_lift(&eq).unwrap();
        prop_assert!(validate_cuboids(&cr).is_ok());
        prop_assert!(cr.proper());
        prop_assert!(cr.boxes().iter().all(Box3::has_square_base));
        let h = heights_from_canonical(&canonical_order_from_realizer(&r2));
        prop_assert!(validate_heights(&r2, &h).is_ok());
        let b = cr.boxes();
        for u in 0..b.len() {
            for v in u + 1..b.len() {
                if !cr.host().has_edge(u, v) {
                    prop_assert_eq!(classify(&b[u], &b[v]), Touch::Disjoint);
                }
            }
        }
    }

    #[test]
    fn recognition_matches_oracle(n in 3usize..9, seed in any::<u64>()) {
        let g = random_stacking_graph(n, seed);
        for &[u, v] in g.edges() {
            for e in [[u, v], [v, u]] {
                let found = test_base_edge(&g, e);
                prop_assert_eq!(found.is_ok(), oracle_exists(&g, e).unwrap(), "edge {:?}", e);
                if let Ok(o) = found {
                    prop_assert!(validate_two_canonical_abstract(&g, &o).is_ok());
                    prop_assert!(validate_lrep(&build_lrep(&g, &o).unwrap()).is_ok());
                }
            }
        }
    }

    #[test]
    fn precedence_is_unique_and_relabeling_invariant(n in 3usize..14, seed in any::<u64>(), pseed in any::<u64>()) {
        let g = random_stacking_graph(n, seed);
        let p = permutation(n, pseed);
        let h = g.relabel(&p).unwrap();
        prop_assert_eq!(recognize(&g).is_some(), recognize(&h).is_some());
        if let Some(o) = recognize(&g) {
            let mapped = lgraph::labeling::TwoCanonicalOrder {
                order: o.order.iter().map(|&v| p[v]).collect(),
                base_edge: [p[o.base_edge[0]], p[o.base_edge[1]]],
            };
            prop_assert!(validate_two_canonical_abstract(&h, &mapped).is_ok());
        }
        for &[u, v] in g.edges() {
            let a = precedence_orientation(&g, [u, v]);
            let b = precedence_orientation(&h, [p[u], p[v]]);
            prop_assert_eq!(a.is_some(), b.is_some());
            if let (Some(a), Some(b)) = (a, b) {
                for w in 0..n {
                    let pa = a.pred[w].map(|[x, y]| { let mut q = [p[x], p[y]]; q.sort(); q });
                    prop_assert_eq!(pa, b.pred[p[w]]);
                }
            }
        }
    }

    #[test]
    fn lemma5_criteria_agree(n in 4usize..14, seed in any::<u64>()) {
        let r = compute_realizer(&random_planar_3tree(n, seed), [0, 1, n - 1]).unwrap();
        let s = build_segment_system(r.host(), &r).unwrap();
        let sol = solve_segment_system(&s).unwrap();
        let again = solve_segment_system(&s).unwrap();
        prop_assert_eq!(&sol, &again);
        let sl = lgraph::sl::realize(&s, &sol.values).unwrap();
        let (_, plain) = rep_of(&r);
        let (eq, _) = equilateralize_stepwise(&plain).unwrap();
        for rep in [sl, plain, eq] {
            let a = collinearity_report(&rep, &r).is_ok();
            let b = paired_segment_report(&rep).is_ok();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn sl_runs_validate_and_scale(n in 4usize..12, seed in any::<u64>(), num in 1i64..50, den in 1i64..50) {
        let h = if seed % 2 == 0 { random_planar_3tree(n, seed) } else { random_triangulation(n, seed) };
        let r = compute_realizer(&h, [0, 1, n - 1]).unwrap();
        if let SLOutcome::Converged(run) = felsner_iterate(&h, &r, 20).unwrap() {
            prop_assert!(run.rep.shapes().iter().all(|s| s.is_equilateral()));
            prop_assert!(validate_lrep(&run.rep).is_ok());
            prop_assert!(validate_sl(&run.rep, &run.realizer).is_ok());
            prop_assert!(homothetic_triangles(&run.rep, &run.realizer).is_ok());
            let cubes = cubes_from_sl(&run.rep, &run.realizer).unwrap();
            prop_assert!(cubes.boxes().iter().all(Box3::is_cube));
            let f: Q = qf(num, den);
            prop_assert!(validate_sl(&run.rep.scaled(&f), &run.realizer).is_ok());
        }
        let (_, plain) = rep_of(&r);
        let f: Q = qf(num, den);
        prop_assert_eq!(
            validate_sl(&plain, &r).is_ok(),
            validate_sl(&plain.scaled(&f), &r).is_ok()
        );
    }
}

#[test]
fn relabeled_graph_is_still_a_plane_graph() {
    let g: PlaneGraph = random_triangulation(10, 1);
    let h = g.relabel(&permutation(10, 5)).unwrap();
    assert!(h.is_triangulation());
}
