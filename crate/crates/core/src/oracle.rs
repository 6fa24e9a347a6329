//! Exponential reference implementations for testing.
//!
//! Nothing here shares code with the solver's distance or relation machinery
//! beyond the plain data types.

use std::collections::BTreeSet;

use crate::dspp2::{Query, Verdict};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Length, Link, MixedGraph, UndirectedGraph, VertexId};
use crate::relation::{DisjointMode, Pair, Path, PathPair, Relation2, Semantics, Witness};

/// Default number of search steps an oracle call may take.
pub const DEFAULT_ORACLE_BUDGET: u64 = 5_000_000;

/// Single-source distances by Bellman–Ford.
pub fn bellman_ford(graph: &UndirectedGraph, source: VertexId) -> Vec<Option<Length>> {
    let mut dist = vec![None; graph.vertex_count()];
    dist[source.index()] = Some(0);
    for _ in 0..graph.vertex_count() {
        let mut changed = false;
        for e in graph.edges() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if let Some(da) = dist[a.index()] {
                    let c = da + e.length;
                    if dist[b.index()].is_none_or(|db| c < db) {
                        dist[b.index()] = Some(c);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

struct Budget {
    left: u64,
    total: u64,
}

impl Budget {
    fn new(total: u64) -> Self {
        Self { left: total, total }
    }

    fn charge(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::BudgetExceeded { budget: self.total });
        }
        self.left -= 1;
        Ok(())
    }
}

/// Simple `s → t` paths of length exactly `target`, pruned by the exact
/// remaining distance `to_t`. Paths avoid `blocked_vertices` and
/// `blocked_edges`. `visit` returns `true` to stop the search.
#[allow(clippy::too_many_arguments)]
fn shortest_paths_dfs(
    graph: &UndirectedGraph,
    s: VertexId,
    t: VertexId,
    target: Length,
    to_t: &[Option<Length>],
    blocked_vertices: &[bool],
    blocked_edges: &[bool],
    budget: &mut Budget,
    visit: &mut dyn FnMut(&Path) -> Result<bool>,
) -> Result<bool> {
    if blocked_vertices[s.index()] || blocked_vertices[t.index()] {
        return Ok(false);
    }
    let mut on_path = vec![false; graph.vertex_count()];
    on_path[s.index()] = true;
    let mut path = Path::empty(s);
    let mut sorted: Vec<Vec<(VertexId, EdgeId)>> = graph
        .vertices()
        .map(|v| {
            let mut n = graph.neighbors(v).to_vec();
            n.sort();
            n
        })
        .collect();
    sorted.shrink_to_fit();

    #[allow(clippy::too_many_arguments)]
    fn go(
        graph: &UndirectedGraph,
        sorted: &[Vec<(VertexId, EdgeId)>],
        t: VertexId,
        target: Length,
        length: Length,
        to_t: &[Option<Length>],
        blocked_vertices: &[bool],
        blocked_edges: &[bool],
        on_path: &mut [bool],
        path: &mut Path,
        budget: &mut Budget,
        visit: &mut dyn FnMut(&Path) -> Result<bool>,
    ) -> Result<bool> {
        budget.charge()?;
        let at = path.end();
        if at == t && length == target && visit(path)? {
            return Ok(true);
        }
        for &(w, e) in &sorted[at.index()] {
            if on_path[w.index()] || blocked_vertices[w.index()] || blocked_edges[e.index()] {
                continue;
            }
            let next = length + graph.edge(e).length;
            match to_t[w.index()] {
                Some(rest) if next + rest <= target => {}
                _ => continue,
            }
            on_path[w.index()] = true;
            path.push(Link::Edge(e), w);
            let stop = go(
                graph,
                sorted,
                t,
                target,
                next,
                to_t,
                blocked_vertices,
                blocked_edges,
                on_path,
                path,
                budget,
                visit,
            )?;
            path.pop_step();
            on_path[w.index()] = false;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    go(
        graph,
        &sorted,
        t,
        target,
        0,
        to_t,
        blocked_vertices,
        blocked_edges,
        &mut on_path,
        &mut path,
        budget,
        visit,
    )
}

/// All simple shortest `s → t` paths, in lexicographic order of their vertex sequences.
pub fn enumerate_shortest_paths(
    graph: &UndirectedGraph,
    s: VertexId,
    t: VertexId,
    budget: u64,
) -> Result<Vec<Path>> {
    graph.check_vertex(s)?;
    graph.check_vertex(t)?;
    let to_t = bellman_ford(graph, t);
    let Some(target) = to_t[s.index()] else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let free_v = vec![false; graph.vertex_count()];
    let free_e = vec![false; graph.edge_count()];
    shortest_paths_dfs(
        graph,
        s,
        t,
        target,
        &to_t,
        &free_v,
        &free_e,
        &mut Budget::new(budget),
        &mut |p| {
            out.push(p.clone());
            Ok(false)
        },
    )?;
    Ok(out)
}

/// Decides a query by trying every shortest first path against a search for
/// a shortest second path in what remains.
pub fn brute_force_dspp2(graph: &UndirectedGraph, query: &Query, budget: u64) -> Result<Verdict> {
    for v in [query.s.0, query.s.1, query.t.0, query.t.1] {
        graph.check_vertex(v)?;
    }
    let to_t1 = bellman_ford(graph, query.t.0);
    let to_t2 = bellman_ford(graph, query.t.1);
    let distances = [to_t1[query.s.0.index()], to_t2[query.s.1.index()]];
    let mut verdict = Verdict {
        feasible: false,
        witness: None,
        distances,
    };
    let (Some(d1), Some(d2)) = (distances[0], distances[1]) else {
        return Ok(verdict);
    };
    let mut budget = Budget::new(budget);
    let free_v = vec![false; graph.vertex_count()];
    let free_e = vec![false; graph.edge_count()];
    let mut found: Option<PathPair> = None;
    let mut second_budget = Budget::new(budget.total);
    shortest_paths_dfs(
        graph,
        query.s.0,
        query.t.0,
        d1,
        &to_t1,
        &free_v,
        &free_e,
        &mut budget,
        &mut |p1| {
            let mut blocked_v = vec![false; graph.vertex_count()];
            let mut blocked_e = vec![false; graph.edge_count()];
            match query.mode {
                DisjointMode::Edge => {
                    for l in p1.links() {
                        if let Link::Edge(e) = l {
                            blocked_e[e.index()] = true;
                        }
                    }
                }
                DisjointMode::Vertex => {
                    for v in p1.vertices() {
                        blocked_v[v.index()] = true;
                    }
                }
            }
            let mut second = None;
            shortest_paths_dfs(
                graph,
                query.s.1,
                query.t.1,
                d2,
                &to_t2,
                &blocked_v,
                &blocked_e,
                &mut second_budget,
                &mut |p2| {
                    second = Some(p2.clone());
                    Ok(true)
                },
            )?;
            match second {
                Some(p2) => {
                    found = Some(PathPair {
                        first: p1.clone(),
                        second: p2,
                    });
                    Ok(true)
                }
                None => Ok(false),
            }
        },
    )?;
    if let Some(w) = found {
        verdict.feasible = true;
        verdict.witness = Some(w);
    }
    Ok(verdict)
}

/// Undirected two disjoint paths, lengths ignored.
pub fn brute_force_two_dpp(
    graph: &UndirectedGraph,
    query: &Query,
    budget: u64,
) -> Result<Option<PathPair>> {
    let flat = UndirectedGraph::new(
        graph.vertex_count(),
        graph.edges().iter().map(|e| (e.u, e.v, 0)),
    )?;
    Ok(brute_force_dspp2(&flat, query, budget)?.witness)
}

/// All simple paths of a mixed graph (arcs forward, edges either way),
/// including the empty path at every vertex.
fn all_simple_paths(graph: &MixedGraph, budget: &mut Budget) -> Result<Vec<Path>> {
    fn go(
        graph: &MixedGraph,
        path: &mut Path,
        on: &mut [bool],
        out: &mut Vec<Path>,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.charge()?;
        out.push(path.clone());
        let moves: Vec<(Link, VertexId)> = graph.moves(path.end()).collect();
        for (l, w) in moves {
            if on[w.index()] {
                continue;
            }
            on[w.index()] = true;
            path.push(l, w);
            go(graph, path, on, out, budget)?;
            path.pop_step();
            on[w.index()] = false;
        }
        Ok(())
    }
    let mut out = Vec::new();
    for v in graph.vertices() {
        let mut on = vec![false; graph.vertex_count()];
        on[v.index()] = true;
        go(graph, &mut Path::empty(v), &mut on, &mut out, budget)?;
    }
    Ok(out)
}

/// The forward disjoint-paths relation of a mixed graph by enumerating all
/// pairs of simple paths.
pub fn brute_force_mixed_dpp(
    graph: &MixedGraph,
    mode: DisjointMode,
    budget: u64,
) -> Result<Relation2> {
    let mut budget = Budget::new(budget);
    let paths = all_simple_paths(graph, &mut budget)?;
    let links: Vec<BTreeSet<Link>> = paths.iter().map(|p| p.links().collect()).collect();
    let vertices: Vec<BTreeSet<VertexId>> = paths.iter().map(|p| p.vertices().collect()).collect();
    let mut r = Relation2::new(Semantics::Forward, mode, true);
    for (i, p) in paths.iter().enumerate() {
        for (j, q) in paths.iter().enumerate() {
            budget.charge()?;
            let disjoint = match mode {
                DisjointMode::Edge => links[i].is_disjoint(&links[j]),
                DisjointMode::Vertex => vertices[i].is_disjoint(&vertices[j]),
            };
            if disjoint {
                r.insert(
                    Pair(p.start(), q.start()),
                    Pair(p.end(), q.end()),
                    Witness::paths(PathPair {
                        first: p.clone(),
                        second: q.clone(),
                    }),
                );
            }
        }
    }
    let all: Vec<Link> = graph.links().collect();
    r.extend_ground(0, all.iter().copied());
    r.extend_ground(1, all);
    Ok(r)
}
