use std::collections::BTreeMap;

use proptest::prelude::*;
use serde_json::Value as Json;

use hsg_core::canonical::canonicalize;
use hsg_core::cat::{thin_from_preorder, validate_category, Preorder};
use hsg_core::doc::parse_document;
use hsg_core::hsg::{build_grid, check_state_identity, Axis, Delta, Token};
use hsg_core::neuro::{all_shapes, check_sk_cosk_adjunction, Carrier, Fiber, NeuronFunction, Point3, Synapse, World, WorldSpec, POTENTIAL};
use hsg_core::par::Execution;
use hsg_core::temporal::{enforce_no_future, future_violations, DepGraph, EnforceMode, TimeBinding};
use hsg_core::tower::{rational, FinRing};

fn json() -> impl Strategy<Value = Json> {
    let leaf = prop_oneof![
        Just(Json::Null),
        any::<bool>().prop_map(Json::Bool),
        any::<i64>().prop_map(Json::from),
        (-1e6f64..1e6).prop_map(Json::from),
        "[a-z⊤⊥ \\\\\"]{0,6}".prop_map(Json::String),
    ];
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Json::Array),
            prop::collection::btree_map("[a-z]{1,3}", inner, 0..4).prop_map(|m| Json::Object(m.into_iter().collect())),
        ]
    })
}

fn closure(n: usize, mut rel: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    for i in 0..n {
        rel[i][i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                rel[i][j] |= rel[i][k] && rel[k][j];
            }
        }
    }
    rel
}

fn relation() -> impl Strategy<Value = (usize, Vec<Vec<bool>>)> {
    (1usize..5).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(any::<bool>(), n), n)))
}

fn ring_world(n: usize, weights: Vec<f64>, initial: Vec<f64>) -> WorldSpec {
    let mut spec: WorldSpec = serde_json::from_value(serde_json::json!({ "points": [] })).unwrap();
    spec.points = (0..n).map(|i| Point3::new(&format!("p{i}"), i as f64, 0.0, 0.0)).collect();
    for (k, w) in weights.into_iter().enumerate() {
        spec.synapses.push(Synapse {
            from: format!("p{}", k % n),
            to: format!("p{}", (k * 7 + 1) % n),
            weight: w,
        });
    }
    for (i, v) in initial.into_iter().enumerate().take(n) {
        spec.initial.insert(format!("p{i}"), BTreeMap::from([(POTENTIAL.to_string(), v)]));
    }
    spec.fibers.push(Fiber::Neural { refractory: 0 });
    spec
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_a_fixed_point(v in json()) {
        let once = canonicalize(&v.to_string()).unwrap();
        prop_assert_eq!(canonicalize(&once).unwrap(), once.clone());
        prop_assert_eq!(serde_json::from_str::<Json>(&once).unwrap(), v);
    }

    #[test]
    fn canonical_form_ignores_layout(v in json()) {
        let pretty = serde_json::to_string_pretty(&v).unwrap();
        prop_assert_eq!(canonicalize(&pretty).unwrap(), canonicalize(&v.to_string()).unwrap());
    }

    #[test]
    fn parser_never_panics(s in "\\PC{0,200}") {
        let _ = parse_document(&s);
    }

    #[test]
    fn parser_never_panics_on_json(v in json()) {
        let _ = parse_document(&v.to_string());
        let doc = serde_json::json!({ "format_version": 1, "kind": "grid", "id": "x", "body": v });
        let _ = parse_document(&doc.to_string()).map(|d| d.typed().map(|_| ()));
    }

    #[test]
    fn thin_categories_exist_exactly_for_preorders((n, rel) in relation()) {
        let names: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
        let closed = closure(n, rel.clone());
        let c = thin_from_preorder(&Preorder::from_fn(names.clone(), |i, j| closed[i][j])).unwrap();
        prop_assert!(validate_category(&c).is_ok());
        prop_assert_eq!(c.num_morphisms(), closed.iter().flatten().filter(|&&b| b).count());
        let raw = thin_from_preorder(&Preorder::from_fn(names, |i, j| rel[i][j]));
        prop_assert_eq!(raw.is_ok(), rel == closed);
    }

    #[test]
    fn phi_lands_in_the_unit_interval(w in -1e3f64..1e3, c in -1e3f64..1e3, x in -1e3f64..1e3) {
        let n = NeuronFunction { weights: vec![vec![w]], offset: vec![c], ..NeuronFunction::default() };
        let phi = n.phi(&Carrier::from([(POTENTIAL.to_string(), x)])).unwrap();
        prop_assert!(phi.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn sum_policy_ignores_synapse_order(
        n in 2usize..5,
        weights in prop::collection::vec(-1.0f64..1.0, 1..10),
        initial in prop::collection::vec(0.0f64..1.0, 5),
        rotate in 0usize..10,
    ) {
        let spec = ring_world(n, weights, initial);
        let mut shuffled = spec.clone();
        let k = rotate % shuffled.synapses.len();
        shuffled.synapses.rotate_left(k);
        shuffled.synapses.reverse();
        let mut a = World::new(spec).unwrap();
        let mut b = World::new(shuffled).unwrap();
        a.run(12).unwrap();
        b.run(12).unwrap();
        prop_assert_eq!(a.trace(), b.trace());
    }

    #[test]
    fn parallel_and_sequential_worlds_agree(
        n in 2usize..5,
        weights in prop::collection::vec(-1.0f64..1.0, 1..10),
        initial in prop::collection::vec(0.0f64..1.0, 5),
    ) {
        let spec = ring_world(n, weights, initial);
        let mut a = World::new(spec.clone()).unwrap().with_execution(Execution::Sequential);
        let mut b = World::new(spec).unwrap().with_execution(Execution::Parallel);
        a.run(10).unwrap();
        b.run(10).unwrap();
        prop_assert_eq!(a.trace(), b.trace());
    }

    #[test]
    fn enforcement_leaves_no_future_reads(
        times in prop::collection::vec(0i64..4, 2..8),
        tops in prop::collection::vec(any::<bool>(), 8),
        edges in prop::collection::vec((0usize..8, 0usize..8), 0..12),
    ) {
        let n = times.len();
        let tokens: Vec<Token> = (0..n)
            .map(|i| Token::new(format!("x{i}"), [("time", times[i])], if tops[i] { Delta::Top } else { Delta::Bot }))
            .collect();
        let g = build_grid(vec![Axis::new("time", 0..4i64)], tokens).unwrap();
        let d = DepGraph::new(edges.into_iter().filter(|&(a, b)| a < n && b < n).map(|(a, b)| (format!("x{a}"), format!("x{b}"))));
        let tb = TimeBinding::new("time");
        let once = enforce_no_future(&g, &d, &tb, EnforceMode::Apply).unwrap();
        let live = future_violations(&once.grid, &d, &tb).unwrap();
        prop_assert!(live.iter().all(|(x, _)| !once.grid.token(x).unwrap().delta.is_top()));
        let twice = enforce_no_future(&once.grid, &d, &tb, EnforceMode::Apply).unwrap();
        prop_assert!(twice.flipped.is_empty());
        prop_assert_eq!(twice.grid, once.grid.clone());
        prop_assert!(once.flipped.iter().all(|t| g.token(t).unwrap().delta.is_top()));
    }

    #[test]
    fn state_identity_only_flags_defined_tokens(cells in prop::collection::vec((0i64..3, 0i64..3, any::<bool>()), 0..10)) {
        let tokens: Vec<Token> = cells
            .iter()
            .enumerate()
            .map(|(i, &(a, b, top))| Token::new(format!("t{i}"), [("a", a), ("b", b)], if top { Delta::Top } else { Delta::Bot }))
            .collect();
        let g = build_grid(vec![Axis::new("a", 0..3i64), Axis::new("b", 0..3i64)], tokens).unwrap();
        for class in check_state_identity(&g) {
            prop_assert!(class.tokens.len() >= 2);
            prop_assert!(class.tokens.iter().all(|t| g.token(t).unwrap().delta.is_top()));
        }
    }

    #[test]
    fn rational_arithmetic_round_trips(a in -500i64..500, b in 1i64..50, c in -500i64..500, d in 1i64..50) {
        let (x, y) = (rational(a, b), rational(c, d));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if c != 0 {
            prop_assert_eq!(&(&x * &y) / &y, x);
        }
    }

    #[test]
    fn residue_rings_satisfy_the_axioms(n in 1usize..13) {
        prop_assert!(FinRing::zmod(n).axiom_failures().is_empty());
    }

    #[test]
    fn sk_cosk_counts_agree(i in 0usize..9, j in 0usize..114, n in 0usize..3) {
        let threes = all_shapes(3, Execution::Sequential);
        let fours = all_shapes(4, Execution::Sequential);
        prop_assert!(check_sk_cosk_adjunction(&threes[i], &fours[j], n).unwrap().agree());
        prop_assert!(check_sk_cosk_adjunction(&fours[j], &threes[i], n).unwrap().agree());
    }
}

#[test]
fn shape_enumeration_is_execution_independent() {
    for k in 0..=4 {
        assert_eq!(all_shapes(k, Execution::Sequential), all_shapes(k, Execution::Parallel));
    }
}
