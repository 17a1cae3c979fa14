use gedsearch::bounds::{self, BoundKind, BoundTrees};
use gedsearch::cost::CostModel;
use gedsearch::dataset::{read_edgelist, write_edgelist, Dataset};
use gedsearch::exact::{brute_force_ged, exact_ged, GedOutcome};
use gedsearch::graph::{Graph, SymbolTable};
use gedsearch::index::{RangeOptions, SearchIndex, Searcher, Verify};
use proptest::prelude::*;

/// Labels in `0..labels`, each vertex pair an edge with one in three odds.
fn graph(max_vertices: usize, labels: u32) -> impl Strategy<Value = Graph> {
    (0..=max_vertices).prop_flat_map(move |n| {
        let pairs = n * n.saturating_sub(1) / 2;
        (
            prop::collection::vec(0..labels, n),
            prop::collection::vec(prop::bool::weighted(0.35), pairs),
        )
            .prop_map(move |(vertex_labels, bits)| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_parts(0, vertex_labels, &edges).unwrap()
            })
    })
}

fn costs() -> impl Strategy<Value = CostModel> {
    (1u8..=4, 1u8..=4, 0u8..=4, 0u8..=4).prop_map(|(cv, ce, cvl, cel)| {
        let cv = cv as f64 * 0.5;
        CostModel::new(
            cv,
            ce as f64 * 0.5,
            (cvl as f64 * 0.5).min(2.0 * cv),
            cel as f64 * 0.5,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_matches_brute_force(g in graph(5, 3), h in graph(5, 3), cost in costs()) {
        let truth = brute_force_ged(&g, &h, &cost).unwrap();
        match exact_ged(&g, &h, &cost, None).unwrap() {
            GedOutcome::Exact { distance, path } => {
                prop_assert!((distance - truth).abs() < 1e-9);
                prop_assert!((path.total_cost() - distance).abs() < 1e-9);
                let (edited, witness) = path.apply(&g).unwrap();
                prop_assert_eq!(edited.vertex_count(), h.vertex_count());
                prop_assert_eq!(edited.edge_count(), h.edge_count());
                for e in edited.edges() {
                    prop_assert!(h.has_edge(witness[e.u], witness[e.v]));
                }
                for (v, &t) in witness.iter().enumerate() {
                    prop_assert_eq!(edited.label(v), h.label(t));
                }
            }
            GedOutcome::Exceeded => prop_assert!(false, "no threshold was given"),
        }
    }

    #[test]
    fn threshold_is_sound(g in graph(5, 2), h in graph(5, 2), tau in 0u8..8) {
        let cost = CostModel::uniform();
        let truth = brute_force_ged(&g, &h, &cost).unwrap();
        let out = exact_ged(&g, &h, &cost, Some(tau as f64)).unwrap();
        prop_assert_eq!(out == GedOutcome::Exceeded, truth > tau as f64);
    }

    #[test]
    fn bound_chain_holds(g in graph(6, 3), h in graph(6, 3)) {
        let cost = CostModel::uniform();
        let mut r = bounds::bound_report(&g, &h, &cost, false).unwrap();
        r.exact = Some(brute_force_ged(&g, &h, &cost).unwrap());
        prop_assert!(r.chain_holds(1e-9), "{:?}", r);
    }

    #[test]
    fn lower_bounds_never_exceed_ged(g in graph(5, 3), h in graph(5, 3), cost in costs()) {
        let truth = brute_force_ged(&g, &h, &cost).unwrap();
        let r = bounds::bound_report(&g, &h, &cost, false).unwrap();
        prop_assert!(r.clb <= r.branch_lb + 1e-9);
        prop_assert!(r.branch_lb <= truth + 1e-9);
        prop_assert!(truth <= r.branch_ub.unwrap() + 1e-9);
    }

    #[test]
    fn bounds_are_pseudometrics(a in graph(9, 4), b in graph(9, 4), c in graph(9, 4), cost in costs()) {
        let trees = BoundTrees::for_graphs([&a, &b, &c], &cost).unwrap();
        for kind in [BoundKind::Llb, BoundKind::Dlb, BoundKind::Clb] {
            let d = |x: &Graph, y: &Graph| trees.bound(x, y, kind).unwrap();
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
        }
    }

    #[test]
    fn candidate_sets_nest_and_cover_answers(
        db in prop::collection::vec(graph(5, 3), 1..25),
        q in graph(5, 3),
        r1 in 0u8..4,
        extra in 0u8..3,
    ) {
        let db: Vec<Graph> = db.into_iter().enumerate().map(|(i, g)| g.with_id(i)).collect();
        let cost = CostModel::uniform();
        let index = SearchIndex::build(&db, &cost, BoundKind::Clb).unwrap();
        let s = Searcher::new(&index, &db).unwrap();
        let (r1, r2) = (r1 as f64, (r1 + extra) as f64);
        let none = RangeOptions { verify: Verify::None, extra_filter: None };
        let small = s.range(&q, r1, none).unwrap().ids();
        let large = s.range(&q, r2, none).unwrap().ids();
        prop_assert!(small.iter().all(|i| large.contains(i)));
        let answers = s.range(&q, r1, RangeOptions::default()).unwrap().ids();
        prop_assert!(answers.iter().all(|i| small.contains(i)));
        for g in &db {
            let inside = brute_force_ged(&q, g, &cost).unwrap() <= r1;
            prop_assert_eq!(inside, answers.contains(&g.id()));
        }
    }

    #[test]
    fn edgelist_round_trip(graphs in prop::collection::vec(graph(6, 4), 0..8)) {
        let symbols: SymbolTable = (0..4).map(|l| format!("L{l}")).collect();
        let ds = Dataset::new("prop", graphs, symbols);
        let mut text = Vec::new();
        write_edgelist(&ds, &mut text).unwrap();
        let back = read_edgelist(text.as_slice(), "prop").unwrap();
        prop_assert_eq!(back.len(), ds.len());
        for (a, b) in ds.graphs.iter().zip(&back.graphs) {
            prop_assert_eq!(
                gedsearch::dataset::canonical_text(&ds, a),
                gedsearch::dataset::canonical_text(&back, b)
            );
        }
    }
}
