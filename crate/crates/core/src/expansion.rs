//! The partially oriented expansion of an instance and its ordered components.
//!
//! Lengths are multiplied by 3 so that the three arcs of a gadget can each
//! carry a third of the edge length exactly.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{
    is_weakly_acyclic, weakly_connected_components, ArcId, EdgeId, Length, Link, MixedGraph,
    Partition, UndirectedGraph, VertexId,
};
use crate::metrics::{dijkstra, in_shortest_path_network, DistanceMap};
use crate::relation::DisjointMode;

/// Length multiplier applied when building an expansion.
pub const SCALE: Length = 3;

/// Which shortest path networks an arc belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArcClass {
    /// In `A1` only.
    FirstOnly,
    /// In `A2` only.
    SecondOnly,
    /// In both `A1` and `A2`.
    Both,
}

impl ArcClass {
    /// Whether path `i` (0 or 1) may use the arc.
    pub fn usable_by(self, i: usize) -> bool {
        match self {
            ArcClass::FirstOnly => i == 0,
            ArcClass::SecondOnly => i == 1,
            ArcClass::Both => true,
        }
    }
}

/// The original edge an arc stands for.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArcOrigin {
    Plain(EdgeId),
    Gadget { edge: EdgeId, gadget: usize },
}

impl ArcOrigin {
    pub fn edge(self) -> EdgeId {
        match self {
            ArcOrigin::Plain(e) | ArcOrigin::Gadget { edge: e, .. } => e,
        }
    }
}

/// The gadget replacing an edge `{v, w}` whose orientations conflict; `v` is the
/// tail under the first distance function.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub edge: EdgeId,
    pub v: VertexId,
    pub w: VertexId,
    pub z_minus: VertexId,
    pub z_plus: VertexId,
    /// `v→z⁻`, `z⁺→w`, `w→z⁻`, `z⁺→v`, `z⁻→z⁺`
    pub arcs: [ArcId; 5],
}

#[derive(Clone, Debug)]
pub struct Expansion {
    graph: MixedGraph,
    original_vertices: usize,
    sources: (VertexId, VertexId),
    mode: DisjointMode,
    classes: Vec<ArcClass>,
    origins: Vec<ArcOrigin>,
    arc_lengths: Vec<Length>,
    zero_edges: Vec<EdgeId>,
    gadgets: Vec<Gadget>,
    distances: [Vec<Option<Length>>; 2],
}

/// Builds the expansion for sources `(s1, s2)`. In vertex mode each conflicting
/// edge becomes two opposite arcs instead of a gadget.
pub fn build_expansion(
    graph: &UndirectedGraph,
    sources: (VertexId, VertexId),
    mode: DisjointMode,
) -> Result<Expansion> {
    graph.check_vertex(sources.0)?;
    graph.check_vertex(sources.1)?;
    let d = [dijkstra(graph, sources.0), dijkstra(graph, sources.1)];
    let n = graph.vertex_count();
    let scaled = |x: Option<Length>| x.map(|x| x * SCALE);
    let mut distances = [
        d[0].as_slice()
            .iter()
            .map(|&x| scaled(x))
            .collect::<Vec<_>>(),
        d[1].as_slice()
            .iter()
            .map(|&x| scaled(x))
            .collect::<Vec<_>>(),
    ];

    let mut arcs = Vec::new();
    let mut classes = Vec::new();
    let mut origins = Vec::new();
    let mut arc_lengths = Vec::new();
    let mut edges = Vec::new();
    let mut zero_edges = Vec::new();
    let mut gadgets = Vec::new();
    let mut next_vertex = n;

    let mut add_arc = |arcs: &mut Vec<(VertexId, VertexId)>,
                       tail: VertexId,
                       head: VertexId,
                       class: ArcClass,
                       origin: ArcOrigin,
                       length: Length| {
        arcs.push((tail, head));
        classes.push(class);
        origins.push(origin);
        arc_lengths.push(length);
        ArcId(arcs.len() as u32 - 1)
    };

    for e in graph.edge_ids() {
        let edge = *graph.edge(e);
        if edge.length == 0 {
            edges.push((edge.u, edge.v));
            zero_edges.push(e);
            continue;
        }
        let orient = |di: &DistanceMap| {
            if !in_shortest_path_network(graph, di, e) {
                return None;
            }
            if di.get(edge.u) < di.get(edge.v) {
                Some((edge.u, edge.v))
            } else {
                Some((edge.v, edge.u))
            }
        };
        let length = edge.length * SCALE;
        let plain = ArcOrigin::Plain(e);
        match (orient(&d[0]), orient(&d[1])) {
            (None, None) => {}
            (Some((t, h)), None) => {
                add_arc(&mut arcs, t, h, ArcClass::FirstOnly, plain, length);
            }
            (None, Some((t, h))) => {
                add_arc(&mut arcs, t, h, ArcClass::SecondOnly, plain, length);
            }
            (Some(o1), Some(o2)) if o1 == o2 => {
                add_arc(&mut arcs, o1.0, o1.1, ArcClass::Both, plain, length);
            }
            (Some((v, w)), Some(_)) => match mode {
                DisjointMode::Vertex => {
                    add_arc(&mut arcs, v, w, ArcClass::FirstOnly, plain, length);
                    add_arc(&mut arcs, w, v, ArcClass::SecondOnly, plain, length);
                }
                DisjointMode::Edge => {
                    let third = edge.length;
                    let z_minus = VertexId(next_vertex as u32);
                    let z_plus = VertexId(next_vertex as u32 + 1);
                    next_vertex += 2;
                    let origin = ArcOrigin::Gadget {
                        edge: e,
                        gadget: gadgets.len(),
                    };
                    let a = [
                        add_arc(&mut arcs, v, z_minus, ArcClass::FirstOnly, origin, third),
                        add_arc(&mut arcs, z_plus, w, ArcClass::FirstOnly, origin, third),
                        add_arc(&mut arcs, w, z_minus, ArcClass::SecondOnly, origin, third),
                        add_arc(&mut arcs, z_plus, v, ArcClass::SecondOnly, origin, third),
                        add_arc(&mut arcs, z_minus, z_plus, ArcClass::Both, origin, third),
                    ];
                    let (d1v, d2w) = (
                        distances[0][v.index()].expect("reachable"),
                        distances[1][w.index()].expect("reachable"),
                    );
                    distances[0].extend([Some(d1v + third), Some(d1v + 2 * third)]);
                    distances[1].extend([Some(d2w + third), Some(d2w + 2 * third)]);
                    gadgets.push(Gadget {
                        edge: e,
                        v,
                        w,
                        z_minus,
                        z_plus,
                        arcs: a,
                    });
                }
            },
        }
    }

    let graph = MixedGraph::new(next_vertex, arcs, edges)?;
    Ok(Expansion {
        graph,
        original_vertices: n,
        sources,
        mode,
        classes,
        origins,
        arc_lengths,
        zero_edges,
        gadgets,
        distances,
    })
}

impl Expansion {
    /// The mixed graph `(W, E0 ∪ A1 ∪ A2)`; its edges are exactly `E0`.
    pub fn graph(&self) -> &MixedGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn original_vertex_count(&self) -> usize {
        self.original_vertices
    }

    pub fn is_original(&self, v: VertexId) -> bool {
        v.index() < self.original_vertices
    }

    pub fn sources(&self) -> (VertexId, VertexId) {
        self.sources
    }

    pub fn mode(&self) -> DisjointMode {
        self.mode
    }

    pub fn class(&self, a: ArcId) -> ArcClass {
        self.classes[a.index()]
    }

    pub fn origin(&self, a: ArcId) -> ArcOrigin {
        self.origins[a.index()]
    }

    /// Scaled length of an arc.
    pub fn arc_length(&self, a: ArcId) -> Length {
        self.arc_lengths[a.index()]
    }

    pub fn gadgets(&self) -> &[Gadget] {
        &self.gadgets
    }

    pub fn count_class(&self, class: ArcClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    /// The original edge behind an expansion link.
    pub fn original_edge(&self, link: Link) -> EdgeId {
        match link {
            Link::Arc(a) => self.origin(a).edge(),
            Link::Edge(e) => self.zero_edges[e.index()],
        }
    }

    /// Whether path `i` (0 or 1) may use the link.
    pub fn usable_by(&self, link: Link, i: usize) -> bool {
        match link {
            Link::Arc(a) => self.class(a).usable_by(i),
            Link::Edge(_) => true,
        }
    }

    /// Scaled distance from source `i` (0 or 1), extended to gadget vertices.
    pub fn distance(&self, i: usize, v: VertexId) -> Option<Length> {
        self.distances[i][v.index()]
    }

    /// `d1 − d2` in original units, with unreachable distances read as 0.
    pub fn potential(&self, v: VertexId) -> i64 {
        let d = |i: usize| self.distance(i, v).unwrap_or(0) as i64;
        let diff = d(0) - d(1);
        debug_assert_eq!(diff % SCALE as i64, 0);
        diff / SCALE as i64
    }

    /// Vertices reachable from `from` along `E0` and the arcs path `i` may use.
    pub fn reachable(&self, i: usize, from: &[VertexId], backward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack: Vec<VertexId> = Vec::new();
        for &v in from {
            if !seen[v.index()] {
                seen[v.index()] = true;
                stack.push(v);
            }
        }
        while let Some(v) = stack.pop() {
            let arcs = if backward {
                self.graph.in_arcs(v)
            } else {
                self.graph.out_arcs(v)
            };
            let via_arcs = arcs
                .iter()
                .filter(|&&a| self.class(a).usable_by(i))
                .map(|&a| {
                    let (t, h) = self.graph.arc(a);
                    if backward {
                        t
                    } else {
                        h
                    }
                });
            let via_edges = self.graph.edge_neighbors(v).iter().map(|&(w, _)| w);
            for w in via_arcs.chain(via_edges).collect::<Vec<_>>() {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Recomputes `d_i` by Dijkstra over `E0 ∪ A_i` and compares it with the
    /// stored (formula-extended) distances on every vertex.
    pub fn check_distances(&self) -> Result<()> {
        for i in 0..2 {
            let source = if i == 0 {
                self.sources.0
            } else {
                self.sources.1
            };
            let mut dist: Vec<Option<Length>> = vec![None; self.vertex_count()];
            let mut heap = BinaryHeap::new();
            dist[source.index()] = Some(0);
            heap.push(Reverse((0, source)));
            while let Some(Reverse((d, v))) = heap.pop() {
                if dist[v.index()] != Some(d) {
                    continue;
                }
                let arcs = self
                    .graph
                    .out_arcs(v)
                    .iter()
                    .filter(|&&a| self.class(a).usable_by(i))
                    .map(|&a| (self.graph.arc(a).1, self.arc_length(a)));
                let edges = self.graph.edge_neighbors(v).iter().map(|&(w, _)| (w, 0));
                for (w, len) in arcs.chain(edges) {
                    let c = d + len;
                    if dist[w.index()].is_none_or(|old| c < old) {
                        dist[w.index()] = Some(c);
                        heap.push(Reverse((c, w)));
                    }
                }
            }
            for v in self.graph.vertices() {
                // gadget vertices are only reachable by the path class their arcs admit
                let stored = self.distance(i, v);
                if self.is_original(v) && dist[v.index()] != stored {
                    return Err(Error::Invariant(format!(
                        "d{} of vertex {v}: expansion gives {:?}, expected {stored:?}",
                        i + 1,
                        dist[v.index()]
                    )));
                }
                if !self.is_original(v) && dist[v.index()].is_some_and(|x| Some(x) != stored) {
                    return Err(Error::Invariant(format!(
                        "d{} of gadget vertex {v} differs from its closed form",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Components of `(W, E0 ∪ (A1∩A2))` sorted by `d1 − d2`.
#[derive(Clone, Debug)]
pub struct OrderedComponents {
    cells: Vec<Vec<VertexId>>,
    values: Vec<i64>,
    position: Vec<usize>,
}

impl OrderedComponents {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells in processing order.
    pub fn cells(&self) -> &[Vec<VertexId>] {
        &self.cells
    }

    /// `d1 − d2` of each cell, in processing order.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Position of the cell holding `v`.
    pub fn position(&self, v: VertexId) -> usize {
        self.position[v.index()]
    }

    /// Checks that every cell induces a weakly acyclic graph whose arcs are all
    /// in `A1∩A2`, and that `A1` arcs between cells go forward and `A2` arcs
    /// backward in the order.
    pub fn verify(&self, expansion: &Expansion) -> Result<()> {
        self.verify_within(expansion, &|_| true)
    }

    pub(crate) fn verify_within(
        &self,
        expansion: &Expansion,
        keep: &dyn Fn(VertexId) -> bool,
    ) -> Result<()> {
        let g = expansion.graph();
        for a in g.arc_ids() {
            let (t, h) = g.arc(a);
            if !keep(t) || !keep(h) {
                continue;
            }
            let (pt, ph) = (self.position(t), self.position(h));
            let class = expansion.class(a);
            if pt == ph {
                if class != ArcClass::Both {
                    return Err(Error::Invariant(format!(
                        "arc {t}->{h} of class {class:?} inside component {pt}"
                    )));
                }
                continue;
            }
            let ok = match class {
                ArcClass::FirstOnly => pt < ph,
                ArcClass::SecondOnly => pt > ph,
                ArcClass::Both => false,
            };
            if !ok {
                return Err(Error::Invariant(format!(
                    "arc {t}->{h} of class {class:?} runs from component {pt} to {ph}"
                )));
            }
        }
        for e in g.edge_ids() {
            let (u, v) = g.edge(e);
            if keep(u) && keep(v) && self.position(u) != self.position(v) {
                return Err(Error::Invariant(format!(
                    "zero edge {u}-{v} joins two components"
                )));
            }
        }
        for (j, cell) in self.cells.iter().enumerate() {
            if cell.len() > 1 && !is_weakly_acyclic(&g.induced(cell, false).graph) {
                return Err(Error::Invariant(format!(
                    "component {j} is not weakly acyclic"
                )));
            }
            if cell
                .iter()
                .any(|&v| expansion.potential(v) != self.values[j])
            {
                return Err(Error::Invariant(format!(
                    "d1 - d2 is not constant on component {j}"
                )));
            }
        }
        Ok(())
    }
}

/// Components of `(W, E0 ∪ (A1∩A2))`, sorted by `d1 − d2`, ties by smallest vertex.
pub fn ordered_components(expansion: &Expansion) -> OrderedComponents {
    ordered_components_within(expansion, &|_| true)
}

/// As [`ordered_components`] on the subgraph induced by the vertices `keep`
/// accepts; other vertices end up in singleton cells.
pub(crate) fn ordered_components_within(
    expansion: &Expansion,
    keep: &dyn Fn(VertexId) -> bool,
) -> OrderedComponents {
    let g = expansion.graph();
    let partition: Partition = weakly_connected_components(
        g,
        |a| {
            let (t, h) = g.arc(a);
            expansion.class(a) == ArcClass::Both && keep(t) && keep(h)
        },
        |e| {
            let (u, v) = g.edge(e);
            keep(u) && keep(v)
        },
    );
    let mut order: Vec<(i64, VertexId, usize)> = partition
        .cells()
        .iter()
        .enumerate()
        .map(|(c, cell)| (expansion.potential(cell[0]), cell[0], c))
        .collect();
    order.sort_unstable();
    let mut position = vec![0; g.vertex_count()];
    let mut cells = Vec::with_capacity(order.len());
    let mut values = Vec::with_capacity(order.len());
    for (j, &(value, _, c)) in order.iter().enumerate() {
        let cell = partition.cell(c).to_vec();
        for &v in &cell {
            position[v.index()] = j;
        }
        cells.push(cell);
        values.push(value);
    }
    OrderedComponents {
        cells,
        values,
        position,
    }
}
