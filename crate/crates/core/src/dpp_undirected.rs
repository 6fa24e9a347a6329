//! Two disjoint paths in small undirected graphs.
//!
//! The dynamic programs only ever hand this subroutine the components of the
//! zero-length edges, so an exhaustive search is used: every simple path of
//! the first terminal pair is enumerated and the second pair is answered by a
//! breadth-first search in what the first path leaves over. Restricting the
//! first path to simple paths loses nothing, since any walk contains a simple
//! path on a subset of its edges and vertices.
//!
//! The search is capped by a path budget; exceeding it is an error, never a
//! silently wrong relation. Other algorithms can be plugged in through
//! [`TwoPathsSolver`].

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Link, UndirectedGraph, VertexId};
use crate::relation::{DisjointMode, Pair, Path, PathPair, Relation2, Semantics, Witness};

pub const DEFAULT_PATH_BUDGET: u64 = 1_000_000;

/// Computes the full two-disjoint-paths relation of an undirected graph.
/// Lengths are ignored; the result has forward semantics and is reflexive in
/// edge mode.
pub trait TwoPathsSolver: Sync {
    fn relation(
        &self,
        graph: &UndirectedGraph,
        mode: DisjointMode,
        witnesses: bool,
    ) -> Result<Relation2>;
}

/// The exhaustive reference implementation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Exhaustive {
    pub budget: u64,
}

impl Default for Exhaustive {
    fn default() -> Self {
        Self {
            budget: DEFAULT_PATH_BUDGET,
        }
    }
}

impl TwoPathsSolver for Exhaustive {
    fn relation(
        &self,
        graph: &UndirectedGraph,
        mode: DisjointMode,
        witnesses: bool,
    ) -> Result<Relation2> {
        two_disjoint_paths_relation(graph, mode, self.budget, witnesses)
    }
}

struct Search<'a> {
    graph: &'a UndirectedGraph,
    budget: u64,
    enumerated: u64,
    on_path: Vec<bool>,
    used_edge: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(graph: &'a UndirectedGraph, budget: u64) -> Self {
        Self {
            graph,
            budget,
            enumerated: 0,
            on_path: vec![false; graph.vertex_count()],
            used_edge: vec![false; graph.edge_count()],
        }
    }

    fn charge(&mut self) -> Result<()> {
        self.enumerated += 1;
        if self.enumerated > self.budget {
            return Err(Error::ComponentTooLarge {
                vertices: self.graph.vertex_count(),
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Depth-first enumeration of the simple paths starting at `start`;
    /// `visit` sees each path while its vertices and edges are marked.
    /// Returning `Ok(true)` from `visit` stops the search.
    fn simple_paths<F>(&mut self, start: VertexId, visit: &mut F) -> Result<bool>
    where
        F: FnMut(&Self, &Path) -> Result<bool>,
    {
        let mut path = Path::empty(start);
        self.on_path[start.index()] = true;
        let done = self.extend(&mut path, visit);
        self.on_path[start.index()] = false;
        done
    }

    fn extend<F>(&mut self, path: &mut Path, visit: &mut F) -> Result<bool>
    where
        F: FnMut(&Self, &Path) -> Result<bool>,
    {
        self.charge()?;
        if visit(self, path)? {
            return Ok(true);
        }
        let at = path.end();
        let graph = self.graph;
        for &(next, e) in graph.neighbors(at) {
            if self.on_path[next.index()] {
                continue;
            }
            self.on_path[next.index()] = true;
            self.used_edge[e.index()] = true;
            path.push(Link::Edge(e), next);
            let done = self.extend(path, visit);
            path.pop_step();
            self.used_edge[e.index()] = false;
            self.on_path[next.index()] = false;
            if done? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// BFS tree from `from` avoiding the current path's edges (edge mode) or
    /// vertices (vertex mode). Returns the parent link of every reached vertex.
    fn residual_tree(&self, from: VertexId, mode: DisjointMode) -> Vec<Option<(EdgeId, VertexId)>> {
        let n = self.graph.vertex_count();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        if mode == DisjointMode::Vertex && self.on_path[from.index()] {
            return parent;
        }
        seen[from.index()] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in self.graph.neighbors(x) {
                if seen[y.index()] {
                    continue;
                }
                let blocked = match mode {
                    DisjointMode::Edge => self.used_edge[e.index()],
                    DisjointMode::Vertex => self.on_path[y.index()],
                };
                if blocked {
                    continue;
                }
                seen[y.index()] = true;
                parent[y.index()] = Some((e, x));
                queue.push_back(y);
            }
        }
        parent
    }
}

fn reached(parent: &[Option<(EdgeId, VertexId)>], from: VertexId, to: VertexId) -> bool {
    to == from || parent[to.index()].is_some()
}

fn trace(parent: &[Option<(EdgeId, VertexId)>], from: VertexId, to: VertexId) -> Path {
    let mut rev = Vec::new();
    let mut at = to;
    while at != from {
        let (e, prev) = parent[at.index()].expect("vertex reached by the search");
        rev.push((Link::Edge(e), at));
        at = prev;
    }
    rev.reverse();
    Path::new(from, rev)
}

/// All `((v1, v2), (w1, w2))` with mode-disjoint `v1–w1` and `v2–w2` paths.
pub fn two_disjoint_paths_relation(
    graph: &UndirectedGraph,
    mode: DisjointMode,
    budget: u64,
    witnesses: bool,
) -> Result<Relation2> {
    let mut relation = Relation2::new(Semantics::Forward, mode, witnesses);
    let links: Vec<Link> = graph.edge_ids().map(Link::Edge).collect();
    relation.extend_ground(0, links.iter().copied());
    relation.extend_ground(1, links);
    let mut search = Search::new(graph, budget);
    for v1 in graph.vertices() {
        search.simple_paths(v1, &mut |s: &Search, p1: &Path| {
            let w1 = p1.end();
            for v2 in graph.vertices() {
                if mode == DisjointMode::Vertex && s.on_path[v2.index()] {
                    continue;
                }
                let parent = s.residual_tree(v2, mode);
                for w2 in graph.vertices() {
                    if !reached(&parent, v2, w2) {
                        continue;
                    }
                    let (left, right) = (Pair(v1, v2), Pair(w1, w2));
                    if relation.contains(left, right) {
                        continue;
                    }
                    let witness = if !witnesses || left == right {
                        Witness::Empty
                    } else {
                        Witness::paths(PathPair {
                            first: p1.clone(),
                            second: trace(&parent, v2, w2),
                        })
                    };
                    relation.insert(left, right, witness);
                }
            }
            Ok(false)
        })?;
    }
    Ok(relation)
}

/// Point query: mode-disjoint `v1–w1` and `v2–w2` paths, without building the relation.
pub fn two_disjoint_paths_exists(
    graph: &UndirectedGraph,
    v: Pair,
    w: Pair,
    mode: DisjointMode,
    budget: u64,
) -> Result<Option<PathPair>> {
    for x in [v.0, v.1, w.0, w.1] {
        graph.check_vertex(x)?;
    }
    let mut search = Search::new(graph, budget);
    let mut found = None;
    search.simple_paths(v.0, &mut |s: &Search, p1: &Path| {
        if p1.end() != w.0 {
            return Ok(false);
        }
        if mode == DisjointMode::Vertex && s.on_path[v.1.index()] {
            return Ok(false);
        }
        let parent = s.residual_tree(v.1, mode);
        if reached(&parent, v.1, w.1) {
            found = Some(PathPair {
                first: p1.clone(),
                second: trace(&parent, v.1, w.1),
            });
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MixedGraph;

    fn cycle4() -> UndirectedGraph {
        // a=0, b=1, c=2, d=3
        UndirectedGraph::from_edges(4, &[(0, 1, 0), (1, 2, 0), (2, 3, 0), (3, 0, 0)]).unwrap()
    }

    fn path3() -> UndirectedGraph {
        UndirectedGraph::from_edges(3, &[(0, 1, 0), (1, 2, 0)]).unwrap()
    }

    #[test]
    fn cycle_has_two_edge_disjoint_routes() {
        let r = two_disjoint_paths_relation(&cycle4(), DisjointMode::Edge, 1000, true).unwrap();
        assert!(r.contains(Pair::new(0, 0), Pair::new(2, 2)));
        r.validate_witnesses(&MixedGraph::from_undirected(&cycle4()))
            .unwrap();
    }

    #[test]
    fn path_has_one_route() {
        let r = two_disjoint_paths_relation(&path3(), DisjointMode::Edge, 1000, true).unwrap();
        assert!(!r.contains(Pair::new(0, 0), Pair::new(2, 2)));
        assert!(r.contains(Pair::new(0, 1), Pair::new(2, 1)));
    }

    #[test]
    fn vertex_mode_needs_distinct_terminals() {
        let r = two_disjoint_paths_relation(&cycle4(), DisjointMode::Vertex, 1000, true).unwrap();
        // interiors {b} and {d} are disjoint, but the shared endpoints are not
        assert!(!r.contains(Pair::new(0, 0), Pair::new(2, 2)));
        assert!(r.contains(Pair::new(0, 1), Pair::new(3, 2)));
        assert!(!r.contains(Pair::new(0, 1), Pair::new(2, 3)));
        r.validate_witnesses(&MixedGraph::from_undirected(&cycle4()))
            .unwrap();
        // every entry has pairwise disjoint endpoint sets
        for (l, rt) in r.iter() {
            assert!(l.0 != l.1 && rt.0 != rt.1 && l.0 != rt.1 && l.1 != rt.0);
        }
    }

    #[test]
    fn edge_mode_is_reflexive() {
        let r = two_disjoint_paths_relation(&path3(), DisjointMode::Edge, 1000, false).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!(r.contains(Pair::new(a, b), Pair::new(a, b)));
            }
        }
    }

    #[test]
    fn point_queries() {
        let found = two_disjoint_paths_exists(
            &cycle4(),
            Pair::new(0, 0),
            Pair::new(2, 2),
            DisjointMode::Edge,
            1000,
        )
        .unwrap();
        assert!(found.is_some());
        assert_eq!(
            two_disjoint_paths_exists(
                &path3(),
                Pair::new(0, 0),
                Pair::new(2, 2),
                DisjointMode::Edge,
                1000
            )
            .unwrap(),
            None
        );
        let same = two_disjoint_paths_exists(
            &path3(),
            Pair::new(0, 2),
            Pair::new(0, 2),
            DisjointMode::Edge,
            1000,
        )
        .unwrap()
        .unwrap();
        assert!(same.first.is_empty() && same.second.is_empty());
    }

    #[test]
    fn point_query_agrees_with_relation() {
        let g = UndirectedGraph::from_edges(
            5,
            &[
                (0, 1, 0),
                (1, 2, 0),
                (2, 0, 0),
                (2, 3, 0),
                (3, 4, 0),
                (4, 2, 0),
            ],
        )
        .unwrap();
        for mode in [DisjointMode::Edge, DisjointMode::Vertex] {
            let r = two_disjoint_paths_relation(&g, mode, 10_000, false).unwrap();
            for a in 0..5 {
                for b in 0..5 {
                    for c in 0..5 {
                        for d in 0..5 {
                            let (l, rt) = (Pair::new(a, b), Pair::new(c, d));
                            let q = two_disjoint_paths_exists(&g, l, rt, mode, 10_000).unwrap();
                            assert_eq!(q.is_some(), r.contains(l, rt), "{mode} {l} {rt}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let k5: Vec<(u32, u32, u64)> = (0..5)
            .flat_map(|a| ((a + 1)..5).map(move |b| (a, b, 0)))
            .collect();
        let g = UndirectedGraph::from_edges(5, &k5).unwrap();
        assert!(matches!(
            two_disjoint_paths_relation(&g, DisjointMode::Edge, 10, false),
            Err(Error::ComponentTooLarge {
                vertices: 5,
                budget: 10
            })
        ));
    }
}
