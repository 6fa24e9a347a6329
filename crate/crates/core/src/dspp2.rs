//! The two disjoint shortest paths solver.
//!
//! A solution `P1: s1→t1`, `P2: s2→t2` in the original graph corresponds to
//! disjoint paths in the expansion with `P1` in `E0 ∪ A1` and `P2` in
//! `E0 ∪ A2`. Reading `P2` backwards, the pair relates `(s1, t2)` to
//! `(t1, s2)` in the opposed relation, which is built component by component
//! in the order of `d1 − d2`: `P1` moves forward through that order and the
//! reversed `P2` moves forward as well.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dpp_mixed::{disjoint_paths_relation_with, MixedOptions};
use crate::dpp_undirected::{Exhaustive, DEFAULT_PATH_BUDGET};
use crate::error::{Error, Result};
use crate::expansion::{
    build_expansion, ordered_components_within, ArcClass, Expansion, OrderedComponents,
};
use crate::graph::{Length, Link, Subgraph, UndirectedGraph, VertexId};
use crate::metrics::dijkstra;
use crate::relation::{
    compose, reindex_to_opposed, ArcRef, DeltaOpposed, DisjointMode, Lifted, Pair, Path, PathPair,
    Relation2, Semantics,
};

/// Terminal pairs `(s1, t1)` and `(s2, t2)` with a disjointness mode.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub s: (VertexId, VertexId),
    pub t: (VertexId, VertexId),
    pub mode: DisjointMode,
}

impl Query {
    pub fn new(s1: u32, t1: u32, s2: u32, t2: u32, mode: DisjointMode) -> Self {
        Self {
            s: (VertexId(s1), VertexId(s2)),
            t: (VertexId(t1), VertexId(t2)),
            mode,
        }
    }

    /// Exchanges the two terminal pairs.
    pub fn swapped(self) -> Self {
        Self {
            s: (self.s.1, self.s.0),
            t: (self.t.1, self.t.0),
            mode: self.mode,
        }
    }

    /// Exchanges source and sink of pair `i` (0 or 1).
    pub fn reversed(self, i: usize) -> Self {
        let mut q = self;
        if i == 0 {
            std::mem::swap(&mut q.s.0, &mut q.t.0);
        } else {
            std::mem::swap(&mut q.s.1, &mut q.t.1);
        }
        q
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub feasible: bool,
    /// Paths in the original graph; links are `Link::Edge` of that graph.
    pub witness: Option<PathPair>,
    /// `d1(t1)` and `d2(t2)`.
    pub distances: [Option<Length>; 2],
}

/// How much of the opposed relation is computed.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Evaluation {
    /// Every row on `W²`.
    #[default]
    Full,
    /// Only the rows needed by the query, on vertices that can lie on a
    /// solution; component relations are computed only where states reach.
    Anchored,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub evaluation: Evaluation,
    pub witnesses: bool,
    /// Path budget of the exhaustive subroutine, per component.
    pub budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            evaluation: Evaluation::Full,
            witnesses: true,
            budget: DEFAULT_PATH_BUDGET,
        }
    }
}

/// Per-component measurements of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentStats {
    pub position: usize,
    pub vertices: usize,
    pub arcs: usize,
    pub edges: usize,
    /// Entries of the component's opposed relation (0 when skipped).
    pub relation_entries: usize,
    /// Entries of the running relation after this component.
    pub states: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub expansion_vertices: usize,
    pub kept_vertices: usize,
    pub components: Vec<ComponentStats>,
    pub elapsed: Duration,
}

/// Decides the query; the witness, when requested, is validated before returning.
pub fn solve(graph: &UndirectedGraph, query: &Query, options: &SolveOptions) -> Result<Verdict> {
    solve_with_stats(graph, query, options).map(|(v, _)| v)
}

pub fn solve_with_stats(
    graph: &UndirectedGraph,
    query: &Query,
    options: &SolveOptions,
) -> Result<(Verdict, SolveStats)> {
    let started = Instant::now();
    for v in [query.s.0, query.s.1, query.t.0, query.t.1] {
        graph.check_vertex(v)?;
    }
    let distances = [
        dijkstra(graph, query.s.0).get(query.t.0),
        dijkstra(graph, query.s.1).get(query.t.1),
    ];
    let mut stats = SolveStats::default();
    let infeasible = Verdict {
        feasible: false,
        witness: None,
        distances,
    };
    if distances.iter().any(Option::is_none) {
        return Ok((infeasible, stats));
    }
    let x = build_expansion(graph, query.s, query.mode)?;
    let keep = match options.evaluation {
        Evaluation::Full => vec![true; x.vertex_count()],
        Evaluation::Anchored => {
            let on_path = |i: usize, s: VertexId, t: VertexId| {
                let fwd = x.reachable(i, &[s], false);
                let bwd = x.reachable(i, &[t], true);
                fwd.into_iter()
                    .zip(bwd)
                    .map(|(a, b)| a && b)
                    .collect::<Vec<_>>()
            };
            let a = on_path(0, query.s.0, query.t.0);
            let b = on_path(1, query.s.1, query.t.1);
            a.into_iter().zip(b).map(|(a, b)| a || b).collect()
        }
    };
    let left = Pair(query.s.0, query.t.1);
    let right = Pair(query.t.0, query.s.1);
    let start: Vec<Pair> = match options.evaluation {
        Evaluation::Full => all_pairs(&keep),
        Evaluation::Anchored => vec![left],
    };
    let engine = Engine::new(&x, keep, options)?;
    let relation = engine.run(start, &mut stats)?;
    stats.expansion_vertices = x.vertex_count();
    stats.kept_vertices = engine.keep.iter().filter(|&&k| k).count();

    if !relation.contains(left, right) {
        stats.elapsed = started.elapsed();
        return Ok((infeasible, stats));
    }
    let witness = if options.witnesses {
        let paths = relation
            .path_pair(left, right)
            .ok_or_else(|| Error::Invariant("feasible entry without witness".into()))?;
        let mapped = PathPair {
            first: to_original(&x, &paths.first),
            second: to_original(&x, &paths.second),
        };
        validate_witness(graph, query, &mapped).map_err(Error::Invariant)?;
        Some(mapped)
    } else {
        None
    };
    stats.elapsed = started.elapsed();
    Ok((
        Verdict {
            feasible: true,
            witness,
            distances,
        },
        stats,
    ))
}

/// All sink pairs `t` (original vertices) for which `(s, t)` is feasible.
pub fn successors(
    graph: &UndirectedGraph,
    s: (VertexId, VertexId),
    mode: DisjointMode,
    options: &SolveOptions,
) -> Result<BTreeSet<(VertexId, VertexId)>> {
    graph.check_vertex(s.0)?;
    graph.check_vertex(s.1)?;
    let x = build_expansion(graph, s, mode)?;
    let n = graph.vertex_count();
    let keep = match options.evaluation {
        Evaluation::Full => vec![true; x.vertex_count()],
        Evaluation::Anchored => {
            let a = x.reachable(0, &[s.0], false);
            let b = x.reachable(1, &[s.1], false);
            a.into_iter().zip(b).map(|(a, b)| a || b).collect()
        }
    };
    let lefts: Vec<Pair> = (0..n)
        .map(VertexId::from)
        .filter(|&v| keep[v.index()])
        .map(|v| Pair(s.0, v))
        .collect();
    let start = match options.evaluation {
        Evaluation::Full => all_pairs(&keep),
        Evaluation::Anchored => lefts.clone(),
    };
    let options = SolveOptions {
        witnesses: false,
        ..*options
    };
    let engine = Engine::new(&x, keep, &options)?;
    let relation = engine.run(start, &mut SolveStats::default())?;
    let mut out = BTreeSet::new();
    for l in lefts {
        for (r, _) in relation.row(l) {
            if r.1 == s.1 && x.is_original(r.0) {
                out.insert((r.0, l.1));
            }
        }
    }
    Ok(out)
}

fn all_pairs(keep: &[bool]) -> Vec<Pair> {
    let kept: Vec<VertexId> = (0..keep.len())
        .filter(|&i| keep[i])
        .map(VertexId::from)
        .collect();
    kept.iter()
        .flat_map(|&a| kept.iter().map(move |&b| Pair(a, b)))
        .collect()
}

/// Collapses an expansion path onto the original graph: gadget interiors are
/// dropped and every step is reported by its original edge.
pub fn to_original(x: &Expansion, path: &Path) -> Path {
    let mut out = Path::empty(path.start());
    for &(link, to) in path.steps() {
        if x.is_original(to) {
            out.push(Link::Edge(x.original_edge(link)), to);
        }
    }
    out
}

/// Checks that the paths run `s_i → t_i`, are shortest and are disjoint.
pub fn validate_witness(
    graph: &UndirectedGraph,
    query: &Query,
    paths: &PathPair,
) -> std::result::Result<(), String> {
    let mut used_edges = BTreeSet::new();
    let mut vertex_sets: [BTreeSet<VertexId>; 2] = Default::default();
    for (i, path) in [&paths.first, &paths.second].into_iter().enumerate() {
        let (s, t) = if i == 0 {
            (query.s.0, query.t.0)
        } else {
            (query.s.1, query.t.1)
        };
        if path.start() != s || path.end() != t {
            return Err(format!(
                "path {} runs {}->{} instead of {s}->{t}",
                i + 1,
                path.start(),
                path.end()
            ));
        }
        let mut at = path.start();
        let mut length: Length = 0;
        vertex_sets[i].insert(at);
        for &(link, to) in path.steps() {
            let Link::Edge(e) = link else {
                return Err(format!("path {} uses an arc", i + 1));
            };
            if e.index() >= graph.edge_count() {
                return Err(format!("path {} uses unknown edge {}", i + 1, e.0));
            }
            let edge = graph.edge(e);
            if !((edge.u == at && edge.v == to) || (edge.v == at && edge.u == to)) {
                return Err(format!(
                    "path {} edge {} does not join {at} and {to}",
                    i + 1,
                    e.0
                ));
            }
            if !vertex_sets[i].insert(to) {
                return Err(format!("path {} revisits {to}", i + 1));
            }
            if i == 1 && used_edges.contains(&e) {
                return Err(format!("edge {} is used by both paths", e.0));
            }
            if i == 0 {
                used_edges.insert(e);
            }
            length += edge.length;
            at = to;
        }
        let d = dijkstra(graph, s).get(t);
        if d != Some(length) {
            return Err(format!(
                "path {} has length {length}, distance is {d:?}",
                i + 1
            ));
        }
    }
    if query.mode == DisjointMode::Vertex {
        if let Some(v) = vertex_sets[0].intersection(&vertex_sets[1]).next() {
            return Err(format!("vertex {v} is on both paths"));
        }
    }
    Ok(())
}

/// The opposed-relation dynamic program over one expansion.
struct Engine<'a> {
    x: &'a Expansion,
    keep: Vec<bool>,
    components: OrderedComponents,
    options: SolveOptions,
    /// Component relations computed up front (full evaluation only).
    precomputed: Vec<Option<Relation2>>,
}

impl<'a> Engine<'a> {
    fn new(x: &'a Expansion, keep: Vec<bool>, options: &SolveOptions) -> Result<Self> {
        let keep_fn = |v: VertexId| keep[v.index()];
        let components = ordered_components_within(x, &keep_fn);
        components.verify_within(x, &keep_fn)?;
        let mut engine = Self {
            x,
            keep,
            components,
            options: *options,
            precomputed: Vec::new(),
        };
        if options.evaluation == Evaluation::Full {
            let cells = engine.components.cells();
            engine.precomputed = cells
                .par_iter()
                .map(|cell| {
                    if engine.is_trivial(cell) {
                        return Ok(None);
                    }
                    let frame = engine.x.graph().induced(cell, true);
                    engine.component_relation(&frame, None).map(Some)
                })
                .collect::<Result<_>>()?;
        }
        Ok(engine)
    }

    fn kept(&self, v: VertexId) -> bool {
        self.keep[v.index()]
    }

    /// A cell without internal links relates each pair only to itself.
    fn is_trivial(&self, cell: &[VertexId]) -> bool {
        cell.len() == 1
    }

    /// The opposed relation of `G[W_j]` plus the outside stand-in.
    fn component_relation(
        &self,
        frame: &Subgraph,
        anchors: Option<&[VertexId]>,
    ) -> Result<Relation2> {
        let solver = Exhaustive {
            budget: self.options.budget,
        };
        let opts = MixedOptions {
            witnesses: self.options.witnesses,
            solver: &solver,
            anchors,
        };
        let forward =
            disjoint_paths_relation_with(&frame.graph, self.x.mode(), &opts, &mut |_| {})?;
        Ok(reindex_to_opposed(&forward))
    }

    fn run(&self, start: Vec<Pair>, stats: &mut SolveStats) -> Result<Relation2> {
        let g = self.x.graph();
        let mode = self.x.mode();
        let mut relation =
            Relation2::identity_on(start, Semantics::Opposed, mode, self.options.witnesses);
        for (j, cell) in self.components.cells().iter().enumerate() {
            if !self.kept(cell[0]) {
                continue;
            }
            let started = Instant::now();
            let arc_ref = |a| {
                let (tail, head) = g.arc(a);
                ArcRef {
                    link: Link::Arc(a),
                    tail,
                    head,
                }
            };
            let mut arcs_in = Vec::new();
            let mut arcs_out = Vec::new();
            for &v in cell {
                for &a in g.in_arcs(v) {
                    if self.x.class(a) == ArcClass::FirstOnly && self.kept(g.arc(a).0) {
                        arcs_in.push(arc_ref(a));
                    }
                }
                for &a in g.out_arcs(v) {
                    if self.x.class(a) == ArcClass::SecondOnly && self.kept(g.arc(a).1) {
                        arcs_out.push(arc_ref(a));
                    }
                }
            }
            if !arcs_in.is_empty() || !arcs_out.is_empty() {
                relation = compose(&relation, &DeltaOpposed::new(&arcs_in, &arcs_out, mode));
            }

            let mut frame_info = (cell.len(), 0, 0);
            let mut relation_entries = 0;
            if !self.is_trivial(cell) {
                let frame = Arc::new(g.induced(cell, true));
                frame_info = (
                    cell.len(),
                    frame.graph.arc_count(),
                    frame.graph.edge_count(),
                );
                let lazy;
                let component = match self.options.evaluation {
                    Evaluation::Full => self.precomputed[j].as_ref(),
                    Evaluation::Anchored => {
                        let mut anchors = BTreeSet::new();
                        for (_, r) in relation.iter() {
                            if frame.contains(r.0) || frame.contains(r.1) {
                                anchors.insert(frame.local_or_outside(r.0).expect("stand-in"));
                            }
                        }
                        if anchors.is_empty() {
                            // no state enters this component
                            None
                        } else {
                            let anchors: Vec<VertexId> = anchors.into_iter().collect();
                            lazy = self.component_relation(&frame, Some(&anchors))?;
                            Some(&lazy)
                        }
                    }
                };
                if let Some(component) = component {
                    relation_entries = component.len();
                    relation = compose(
                        &relation,
                        &Lifted {
                            inner: component,
                            frame: &frame,
                        },
                    );
                }
            }
            stats.components.push(ComponentStats {
                position: j,
                vertices: frame_info.0,
                arcs: frame_info.1,
                edges: frame_info.2,
                relation_entries,
                states: relation.len(),
                elapsed: started.elapsed(),
            });
        }
        Ok(relation)
    }
}
