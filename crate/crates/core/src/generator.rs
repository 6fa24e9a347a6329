//! Reproducible instance generation.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`, so a seed pins
//! the exact instance across platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dspp2::{validate_witness, Query};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Length, Link, MixedGraph, UndirectedGraph, VertexId};
use crate::metrics::dijkstra;
use crate::oracle::{brute_force_dspp2, DEFAULT_ORACLE_BUDGET};
use crate::relation::{DisjointMode, Path, PathPair};

/// A graph with one query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: UndirectedGraph,
    pub query: Query,
}

/// A random simple graph with `m` distinct edges; each length is 0 with
/// probability `zero_fraction`, otherwise uniform in `1..=max_length`.
/// Terminals are uniform over all vertices.
pub fn random_instance(
    n: usize,
    m: usize,
    zero_fraction: f64,
    max_length: Length,
    seed: u64,
) -> Result<Instance> {
    if n == 0 || m > n * (n - 1) / 2 {
        return Err(Error::InfeasibleEdgeCount {
            vertices: n,
            edges: m,
        });
    }
    if !(0.0..=1.0).contains(&zero_fraction) || max_length == 0 {
        return Err(Error::InvalidArgument(
            "zero fraction must lie in [0, 1] and max length be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(&mut rng);
    pairs.truncate(m);
    pairs.sort_unstable();
    let edges: Vec<(u32, u32, Length)> = pairs
        .into_iter()
        .map(|(u, v)| {
            let len = if rng.gen_bool(zero_fraction) {
                0
            } else {
                rng.gen_range(1..=max_length)
            };
            (u, v, len)
        })
        .collect();
    let graph = UndirectedGraph::from_edges(n, &edges)?;
    let mut t = || rng.gen_range(0..n as u32);
    let query = Query::new(t(), t(), t(), t(), DisjointMode::Edge);
    Ok(Instance { graph, query })
}

/// A feasible instance with about `3n` edges: two vertex-disjoint planted
/// paths with equal per-hop lengths, small zero-length clusters and longer
/// noise edges that never shorten a planted path.
pub fn planted_instance(n: usize, seed: u64) -> Result<Instance> {
    if n < 6 {
        return Err(Error::InvalidArgument(
            "planted instances need n >= 6".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);
    let plant_len = (n / 4).max(3);
    let plants = [&order[..plant_len], &order[plant_len..2 * plant_len]];
    let hop = [rng.gen_range(2..=6u64), rng.gen_range(2..=6u64)];

    let mut edges: Vec<(u32, u32, Length)> = Vec::new();
    let mut present = std::collections::BTreeSet::new();
    let mut add = |edges: &mut Vec<(u32, u32, Length)>, u: u32, v: u32, len: Length| {
        let key = (u.min(v), u.max(v));
        if u != v && present.insert(key) {
            edges.push((key.0, key.1, len));
            true
        } else {
            false
        }
    };
    for (i, plant) in plants.iter().enumerate() {
        for w in plant.windows(2) {
            add(&mut edges, w[0], w[1], hop[i]);
        }
    }
    // zero-length clusters of at most 6 vertices among the remaining vertices
    let rest = &order[2 * plant_len..];
    let mut i = 0;
    while i + 1 < rest.len() {
        let size = rng.gen_range(2..=6).min(rest.len() - i);
        let cluster = &rest[i..i + size];
        for w in cluster.windows(2) {
            add(&mut edges, w[0], w[1], 0);
        }
        if size >= 3 && rng.gen_bool(0.5) {
            add(&mut edges, cluster[0], cluster[size - 1], 0);
        }
        i += size + rng.gen_range(0..=2);
    }

    let planted_graph = |edges: &[(u32, u32, Length)]| UndirectedGraph::from_edges(n, edges);
    let mut graph = planted_graph(&edges)?;
    let plant_length = |i: usize| hop[i] * (plant_len as Length - 1);
    let target = 3 * n;
    let mut attempts = 0;
    while edges.len() < target && attempts < 40 * n {
        attempts += 1;
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        let len = rng.gen_range(1..=20u64) + 6;
        if u == v || graph.find_edge(VertexId(u), VertexId(v)).is_some() {
            continue;
        }
        edges.push((u.min(v), u.max(v), len));
        let candidate = planted_graph(&edges)?;
        let keeps_plants = (0..2).all(|i| {
            let d = dijkstra(&candidate, VertexId(plants[i][0]));
            d.get(VertexId(*plants[i].last().expect("non-empty"))) == Some(plant_length(i))
        });
        if keeps_plants {
            graph = candidate;
        } else {
            edges.pop();
        }
    }

    let ends = |p: &[u32]| (VertexId(p[0]), VertexId(*p.last().expect("non-empty")));
    let (s1, t1) = ends(plants[0]);
    let (s2, t2) = ends(plants[1]);
    let query = Query {
        s: (s1, s2),
        t: (t1, t2),
        mode: DisjointMode::Edge,
    };
    let plant_path = |p: &[u32]| {
        let mut path = Path::empty(VertexId(p[0]));
        for w in p.windows(2) {
            let e: EdgeId = graph
                .find_edge(VertexId(w[0]), VertexId(w[1]))
                .expect("plant edge");
            path.push(Link::Edge(e), VertexId(w[1]));
        }
        path
    };
    let plant = PathPair {
        first: plant_path(plants[0]),
        second: plant_path(plants[1]),
    };
    validate_witness(&graph, &query, &plant).map_err(Error::Invariant)?;
    if n <= 8 && !brute_force_dspp2(&graph, &query, DEFAULT_ORACLE_BUDGET)?.feasible {
        return Err(Error::Invariant(
            "planted instance rejected by the oracle".into(),
        ));
    }
    Ok(Instance { graph, query })
}

/// A random weakly acyclic mixed graph with `links` arcs and edges on
/// distinct vertex pairs (fewer if the pairs run out). Vertices are spread
/// over ordered blocks; edges stay inside a block and arcs run from an
/// earlier block to a later one.
pub fn random_weakly_acyclic(n: usize, links: usize, seed: u64) -> MixedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = rng.gen_range(1..=n.max(1));
    let block: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    let mut pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(&mut rng);
    let mut arcs = Vec::new();
    let mut edges = Vec::new();
    for (u, v) in pairs.into_iter().take(links) {
        let (bu, bv) = (block[u as usize], block[v as usize]);
        if bu == bv {
            edges.push((u, v));
        } else if bu < bv {
            arcs.push((u, v));
        } else {
            arcs.push((v, u));
        }
    }
    MixedGraph::from_raw(n, &arcs, &edges).expect("valid by construction")
}
