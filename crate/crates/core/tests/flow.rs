mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use railmax_core::flow::{
    build_model, build_ticket_graph, extract_solution, has_dummy_cycle, lp_string, route_flows, ArcOrigin, LinkingMode,
    ModelCounts, ModelOptions, YDomain,
};
use railmax_core::EdgeSet;

use common::{published_routes, usa};

const STRICT: ModelOptions = ModelOptions { linking: LinkingMode::Strict, y_domain: YDomain::Continuous };

#[test]
fn usa_model_sizes() {
    let b = usa();
    let m = build_model(&b, 45, ModelOptions::default());
    assert_eq!(m.counts(), ModelCounts { binary: 78, continuous: 4710, constraints: 1159 });
    let strict = build_model(&b, 45, STRICT);
    assert_eq!(strict.counts(), ModelCounts { binary: 78, continuous: 4710, constraints: 1 + 78 * 30 + 30 * 36 });
}

#[test]
fn usa_ticket_graphs_have_157_arcs() {
    let b = usa();
    for t in b.tickets() {
        let g = build_ticket_graph(&b, t.id);
        assert_eq!(g.arcs.len(), 157);
        let dummy = g.dummy();
        assert_eq!((dummy.tail, dummy.head, dummy.origin), (t.target, t.source, ArcOrigin::Dummy(t.id)));
        let dummies = g.arcs.iter().filter(|a| matches!(a.origin, ArcOrigin::Dummy(_))).count();
        assert_eq!(dummies, 1);
    }
}

#[test]
fn toy_graph_has_dummy_from_9_to_1() {
    let b = common::toy9();
    let g = build_ticket_graph(&b, 0);
    assert_eq!(g.arcs.len(), 2 * b.edge_count() + 1);
    assert_eq!((b.city_name(g.dummy().tail), b.city_name(g.dummy().head)), ("9", "1"));
    let m = build_model(&b, 10, ModelOptions::default());
    let (v, e, k) = (b.city_count(), b.edge_count(), b.ticket_count());
    assert_eq!(m.counts(), ModelCounts { binary: e, continuous: k * (2 * e + 1), constraints: 1 + e + k * v });
}

#[test]
fn emission_is_byte_stable() {
    let b = usa();
    let one = lp_string(&build_model(&b, 45, ModelOptions::default()));
    let two = lp_string(&build_model(&b, 45, ModelOptions::default()));
    assert_eq!(one, two);
    for section in ["Maximize", "Subject To", "Bounds", "Binary", "End"] {
        assert!(one.lines().any(|l| l == section), "missing {section}");
    }
    assert!(one.contains("x_e77") && one.contains("y_k29_a"));
}

#[test]
fn published_routes_extract_to_285() {
    let b = usa();
    let routes = published_routes(&b);
    for options in [ModelOptions::default(), STRICT] {
        let m = build_model(&b, 45, options);
        let sol = route_flows(&b, &m, &routes);
        let e = extract_solution(&b, &m, &sol).unwrap();
        assert_eq!(e.total, 285);
        assert_eq!(e.tickets.len(), 16);
        assert_eq!(e.edges, routes);
        assert_eq!(sol.objective(&m), 285.0);
    }
}

#[test]
fn cycle_search_matches_connectivity_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 1500 {
        let cities = rng.gen_range(3..=10);
        let (edges, tickets) = (rng.gen_range(cities - 1..=18), rng.gen_range(1..=5));
        let b = common::random_board(&mut rng, cities, edges, tickets);
        if b.ticket_count() == 0 {
            continue;
        }
        let keep = rng.gen_range(0.0..1.0);
        let set: EdgeSet = (0..b.edge_count()).filter(|_| rng.gen_bool(keep)).collect();
        let k = rng.gen_range(0..b.ticket_count());
        let t = &b.tickets()[k];
        let cycle = has_dummy_cycle(&b, &build_ticket_graph(&b, k), &set);
        assert_eq!(cycle, b.components(&set).connected(t.source, t.target), "ticket {k} on {:?}", b.to_raw());
        assert_eq!(cycle, common::bfs_connected(&b, &set, t.source, t.target));
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn routed_flows_rescore_in_both_modes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = common::random_board(&mut rng, 7, 12, 4);
        let set: EdgeSet = (0..b.edge_count()).filter(|_| rng.gen_bool(0.5)).collect();
        let budget = b.subset(set).total_length();
        let score = b.subset(set).score().total;
        for options in [ModelOptions::default(), STRICT] {
            let m = build_model(&b, budget, options);
            let sol = route_flows(&b, &m, &set);
            let e = extract_solution(&b, &m, &sol).unwrap();
            prop_assert_eq!(e.total, score);
            prop_assert_eq!(e.edges, set);
            prop_assert_eq!(sol.objective(&m), score as f64);
        }
    }

    #[test]
    fn unit_dummy_flow_implies_completion(seed in any::<u64>()) {
        // Flow routed on a superset, then restricted: whatever survives the
        // feasibility check must be connected.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = common::random_board(&mut rng, 7, 12, 4);
        let all = EdgeSet::full(b.edge_count());
        let m = build_model(&b, b.subset(all).total_length(), STRICT);
        let mut sol = route_flows(&b, &m, &all);
        let set: EdgeSet = (0..b.edge_count()).filter(|_| rng.gen_bool(0.6)).collect();
        for e in 0..b.edge_count() {
            if !set.contains(e) {
                sol.x_values[e] = 0.0;
            }
        }
        if let Ok(e) = extract_solution(&b, &m, &sol) {
            let done = b.subset(set).completed_tickets();
            prop_assert!(e.tickets.iter().all(|k| done.contains(k)));
        }
    }
}
