use proptest::prelude::*;

use dspp::dpp_mixed::{disjoint_paths_relation, disjoint_paths_relation_with, MixedOptions};
use dspp::dpp_undirected::{two_disjoint_paths_relation, DEFAULT_PATH_BUDGET};
use dspp::dspp2::{solve, SolveOptions};
use dspp::expansion::{build_expansion, ordered_components, ArcClass};
use dspp::format::{emit_instance, parse_instance, InstanceFile};
use dspp::generator::{random_instance, random_weakly_acyclic};
use dspp::graph::{Link, MixedGraph, UndirectedGraph, VertexId};
use dspp::metrics::{dijkstra, shortest_path_network};
use dspp::oracle::{bellman_ford, brute_force_mixed_dpp, DEFAULT_ORACLE_BUDGET};
use dspp::relation::{compose, DisjointMode, Pair, Relation2, Semantics, Witness};

fn modes() -> impl Strategy<Value = DisjointMode> {
    prop_oneof![Just(DisjointMode::Edge), Just(DisjointMode::Vertex)]
}

fn small_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = UndirectedGraph> {
    (2..=max_n, any::<u64>(), 0.0..=1.0f64).prop_flat_map(move |(n, seed, zf)| {
        let m_cap = (n * (n - 1) / 2).min(max_m);
        (0..=m_cap).prop_map(move |m| random_instance(n, m, zf, 4, seed).unwrap().graph)
    })
}

fn random_relation(n: u32, entries: Vec<(u32, u32, u32, u32)>) -> Relation2 {
    let mut r = Relation2::new(Semantics::Forward, DisjointMode::Edge, false);
    for (a, b, c, d) in entries {
        r.insert(
            Pair::new(a % n, b % n),
            Pair::new(c % n, d % n),
            Witness::Empty,
        );
    }
    r
}

fn entries() -> impl Strategy<Value = Vec<(u32, u32, u32, u32)>> {
    proptest::collection::vec(any::<(u32, u32, u32, u32)>(), 0..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dijkstra_matches_bellman_ford(g in small_graph(9, 20), s in 0u32..9) {
        let s = VertexId(s % g.vertex_count() as u32);
        let (d, b) = (dijkstra(&g, s), bellman_ford(&g, s));
        prop_assert_eq!(d.as_slice(), b.as_slice());
    }

    #[test]
    fn network_edges_satisfy_the_distance_equation(g in small_graph(9, 20), s in 0u32..9) {
        let s = VertexId(s % g.vertex_count() as u32);
        let d = dijkstra(&g, s);
        for e in shortest_path_network(&g, &d) {
            let edge = g.edge(e);
            let (a, b) = (d.get(edge.u).unwrap(), d.get(edge.v).unwrap());
            prop_assert_eq!(a.abs_diff(b), edge.length);
        }
    }

    #[test]
    fn compose_is_associative(a in entries(), b in entries(), c in entries()) {
        let (r, s, t) = (random_relation(4, a), random_relation(4, b), random_relation(4, c));
        prop_assert_eq!(
            compose(&compose(&r, &s), &t).keys(),
            compose(&r, &compose(&s, &t)).keys()
        );
    }

    #[test]
    fn identity_is_neutral(a in entries()) {
        let r = random_relation(4, a);
        let universe: Vec<VertexId> = (0..4).map(VertexId).collect();
        let id = Relation2::identity(&universe, Semantics::Forward, DisjointMode::Edge, false);
        prop_assert_eq!(compose(&id, &r).keys(), r.keys());
        prop_assert_eq!(compose(&r, &id).keys(), r.keys());
    }

    #[test]
    fn undirected_subroutine_matches_enumeration(g in small_graph(7, 10), mode in modes()) {
        let ours = two_disjoint_paths_relation(&g, mode, DEFAULT_PATH_BUDGET, true).unwrap();
        let mixed = MixedGraph::from_undirected(&g);
        let truth = brute_force_mixed_dpp(&mixed, mode, DEFAULT_ORACLE_BUDGET).unwrap();
        prop_assert_eq!(ours.keys(), truth.keys());
        prop_assert!(ours.validate_witnesses(&mixed).is_ok());
    }

    #[test]
    fn edge_mode_is_monotone_under_edge_addition(g in small_graph(6, 9), u in 0u32..6, v in 0u32..6) {
        let n = g.vertex_count() as u32;
        let (u, v) = (VertexId(u % n), VertexId(v % n));
        prop_assume!(u != v && g.find_edge(u, v).is_none());
        let mut edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.length)).collect();
        edges.push((u, v, 0));
        let bigger = UndirectedGraph::new(g.vertex_count(), edges).unwrap();
        let small = two_disjoint_paths_relation(&g, DisjointMode::Edge, DEFAULT_PATH_BUDGET, false).unwrap();
        let big = two_disjoint_paths_relation(&bigger, DisjointMode::Edge, DEFAULT_PATH_BUDGET, false).unwrap();
        prop_assert!(small.keys().is_subset(&big.keys()));
    }

    #[test]
    fn mixed_dp_matches_enumeration(n in 1usize..=6, links in 0usize..=8, seed in any::<u64>(), mode in modes()) {
        let g = random_weakly_acyclic(n, links, seed);
        let ours = disjoint_paths_relation(&g, mode).unwrap();
        let truth = brute_force_mixed_dpp(&g, mode, DEFAULT_ORACLE_BUDGET).unwrap();
        prop_assert_eq!(ours.keys(), truth.keys());
        prop_assert!(ours.validate_witnesses(&g).is_ok());
    }

    #[test]
    fn mixed_dp_is_reflexive_in_edge_mode(n in 1usize..=6, links in 0usize..=8, seed in any::<u64>()) {
        let g = random_weakly_acyclic(n, links, seed);
        let r = disjoint_paths_relation(&g, DisjointMode::Edge).unwrap();
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                prop_assert!(r.contains(Pair::new(a, b), Pair::new(a, b)));
            }
        }
    }

    #[test]
    fn mixed_dp_iterations_only_grow(n in 1usize..=6, links in 0usize..=8, seed in any::<u64>()) {
        let g = random_weakly_acyclic(n, links, seed);
        let mut previous: Option<std::collections::BTreeSet<(Pair, Pair)>> = None;
        let mut grew = true;
        disjoint_paths_relation_with(&g, DisjointMode::Edge, &MixedOptions::default(), &mut |it| {
            let keys = it.relation.keys();
            if let Some(p) = &previous {
                grew &= p.is_subset(&keys);
            }
            previous = Some(keys);
        }).unwrap();
        prop_assert!(grew);
    }

    // vertex-disjoint pieces may meet at a vertex, so this holds in edge mode only
    #[test]
    fn composition_over_disjoint_link_sets_is_sound(n in 1usize..=5, links in 0usize..=7, seed in any::<u64>(), split in any::<u64>()) {
        let mode = DisjointMode::Edge;
        let g = random_weakly_acyclic(n, links, seed);
        let pick = |i: usize| (split >> (i % 64)) & 1 == 1;
        let part = |side: bool| {
            let arcs: Vec<(u32, u32)> = g.arcs().iter().enumerate()
                .filter(|(i, _)| pick(*i) == side).map(|(_, &(u, v))| (u.0, v.0)).collect();
            let edges: Vec<(u32, u32)> = g.edges().iter().enumerate()
                .filter(|(i, _)| pick(i + 32) == side).map(|(_, &(u, v))| (u.0, v.0)).collect();
            (arcs, edges)
        };
        let (a1, e1) = part(true);
        let (a2, e2) = part(false);
        let r1 = brute_force_mixed_dpp(&MixedGraph::from_raw(n, &a1, &e1).unwrap(), mode, DEFAULT_ORACLE_BUDGET).unwrap();
        let r2 = brute_force_mixed_dpp(&MixedGraph::from_raw(n, &a2, &e2).unwrap(), mode, DEFAULT_ORACLE_BUDGET).unwrap();
        let union = MixedGraph::from_raw(n, &[a1, a2].concat(), &[e1, e2].concat()).unwrap();
        let whole = brute_force_mixed_dpp(&union, mode, DEFAULT_ORACLE_BUDGET).unwrap();
        prop_assert!(compose(&r1, &r2).keys().is_subset(&whole.keys()));
    }

    #[test]
    fn expansion_invariants(g in small_graph(8, 16), s1 in 0u32..8, s2 in 0u32..8, mode in modes()) {
        let n = g.vertex_count() as u32;
        let s = (VertexId(s1 % n), VertexId(s2 % n));
        let x = build_expansion(&g, s, mode).unwrap();
        prop_assert!(x.check_distances().is_ok());
        let zero_edges = g.edges().iter().filter(|e| e.length == 0).count();
        prop_assert_eq!(x.graph().edge_count(), zero_edges);
        for a in x.graph().arc_ids() {
            let (t, h) = x.graph().arc(a);
            let (pt, ph) = (x.potential(t), x.potential(h));
            match x.class(a) {
                ArcClass::FirstOnly => prop_assert!(pt < ph),
                ArcClass::SecondOnly => prop_assert!(pt > ph),
                ArcClass::Both => prop_assert_eq!(pt, ph),
            }
            let link = Link::Arc(a);
            prop_assert!(x.usable_by(link, 0) || x.usable_by(link, 1));
        }
        for gad in x.gadgets() {
            prop_assert!(gad.z_minus.index() >= g.vertex_count());
            prop_assert!(gad.z_plus.index() >= g.vertex_count());
        }
        prop_assert!(ordered_components(&x).verify(&x).is_ok());
    }

    #[test]
    fn length_scaling_keeps_the_verdict(seed in any::<u64>(), n in 2usize..=7, k in 2u64..=5, mode in modes()) {
        let m = (seed as usize) % (n * (n - 1) / 2 + 1);
        let mut inst = random_instance(n, m, 0.3, 4, seed).unwrap();
        inst.query.mode = mode;
        let scaled = inst.graph.scaled(k).unwrap();
        let opts = SolveOptions::default();
        prop_assert_eq!(
            solve(&inst.graph, &inst.query, &opts).unwrap().feasible,
            solve(&scaled, &inst.query, &opts).unwrap().feasible
        );
    }

    #[test]
    fn format_round_trips(seed in any::<u64>(), n in 1usize..=9, zf in 0.0..=1.0f64, vertex in any::<bool>()) {
        let m = (seed as usize) % (n * (n - 1) / 2 + 1);
        let inst = random_instance(n, m, zf, 1000, seed).unwrap();
        let mode = if vertex { DisjointMode::Vertex } else { DisjointMode::Edge };
        let file = InstanceFile {
            graph: inst.graph,
            queries: vec![dspp::dspp2::Query { mode, ..inst.query }],
            mode,
        };
        prop_assert_eq!(parse_instance(&emit_instance(&file)).unwrap(), file);
    }
}
