//! Exact single-source distances and shortest path networks.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{EdgeId, Length, UndirectedGraph, VertexId};

/// Distances from one source; `None` marks an unreachable vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMap {
    source: VertexId,
    dist: Vec<Option<Length>>,
}

impl DistanceMap {
    pub fn new(source: VertexId, dist: Vec<Option<Length>>) -> Self {
        Self { source, dist }
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn get(&self, v: VertexId) -> Option<Length> {
        self.dist[v.index()]
    }

    pub fn is_reachable(&self, v: VertexId) -> bool {
        self.dist[v.index()].is_some()
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn as_slice(&self) -> &[Option<Length>] {
        &self.dist
    }
}

/// Dijkstra with a lazy-deletion binary heap; equal keys pop in vertex order.
pub fn dijkstra(graph: &UndirectedGraph, source: VertexId) -> DistanceMap {
    let mut dist: Vec<Option<Length>> = vec![None; graph.vertex_count()];
    let mut done = vec![false; graph.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source.index()] = Some(0);
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v.index()] {
            continue;
        }
        done[v.index()] = true;
        for &(w, e) in graph.neighbors(v) {
            let candidate = d + graph.edge(e).length;
            if dist[w.index()].is_none_or(|old| candidate < old) {
                dist[w.index()] = Some(candidate);
                heap.push(Reverse((candidate, w)));
            }
        }
    }
    DistanceMap::new(source, dist)
}

/// Whether `e` satisfies `ℓ(e) = |d(u) - d(v)|` with both endpoints reachable.
pub fn in_shortest_path_network(graph: &UndirectedGraph, d: &DistanceMap, e: EdgeId) -> bool {
    let edge = graph.edge(e);
    match (d.get(edge.u), d.get(edge.v)) {
        (Some(a), Some(b)) => edge.length == a.abs_diff(b),
        _ => false,
    }
}

/// The edges lying on some shortest path from the map's source.
pub fn shortest_path_network(graph: &UndirectedGraph, d: &DistanceMap) -> Vec<EdgeId> {
    graph
        .edge_ids()
        .filter(|&e| in_shortest_path_network(graph, d, e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let g = UndirectedGraph::from_edges(1, &[]).unwrap();
        assert_eq!(dijkstra(&g, VertexId(0)).as_slice(), &[Some(0)]);
    }

    #[test]
    fn zero_chain_keeps_distance_zero() {
        let g = UndirectedGraph::from_edges(3, &[(0, 1, 0), (1, 2, 0)]).unwrap();
        assert_eq!(
            dijkstra(&g, VertexId(0)).as_slice(),
            &[Some(0), Some(0), Some(0)]
        );
    }

    #[test]
    fn unreachable_is_explicit() {
        let g = UndirectedGraph::from_edges(3, &[(0, 1, 4)]).unwrap();
        let d = dijkstra(&g, VertexId(0));
        assert_eq!(d.get(VertexId(2)), None);
        assert!(!d.is_reachable(VertexId(2)));
        assert_eq!(d.get(VertexId(1)), Some(4));
    }

    #[test]
    fn triangle_network_contains_all_edges() {
        let g = UndirectedGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 2)]).unwrap();
        let d = dijkstra(&g, VertexId(0));
        assert_eq!(d.as_slice(), &[Some(0), Some(1), Some(2)]);
        assert_eq!(shortest_path_network(&g, &d).len(), 3);
    }

    #[test]
    fn network_skips_unreachable_and_keeps_zero_edges() {
        let g =
            UndirectedGraph::from_edges(5, &[(0, 1, 0), (1, 2, 5), (0, 2, 1), (3, 4, 0)]).unwrap();
        let d = dijkstra(&g, VertexId(0));
        assert_eq!(shortest_path_network(&g, &d), vec![EdgeId(0), EdgeId(2)]);
    }
}
