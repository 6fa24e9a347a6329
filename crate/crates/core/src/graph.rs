//! Graph representations shared by the solver: simple undirected graphs with
//! integer lengths, mixed graphs with arcs and edges, vertex partitions and the
//! contraction/topological-order machinery used by both dynamic programs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use petgraph::unionfind::UnionFind;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};

/// Edge lengths are non-negative integers. Inputs are capped at [`MAX_LENGTH`]
/// so that path sums (after the internal x3 scaling) never overflow `u64`.
pub type Length = u64;

pub const MAX_LENGTH: Length = u32::MAX as Length;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(value: usize) -> Self {
        VertexId(u32::try_from(value).expect("vertex index exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcId(pub u32);

impl ArcId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One element of a mixed graph's `A ∪ E`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    Arc(ArcId),
    Edge(EdgeId),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub length: Length,
}

impl Edge {
    /// The endpoint across from `x`.
    #[inline]
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

fn check_vertex(v: VertexId, n: usize) -> Result<()> {
    if v.index() >= n {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            count: n,
        });
    }
    Ok(())
}

/// A simple undirected graph with non-negative integer edge lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

impl UndirectedGraph {
    /// Builds the graph, rejecting self-loops, parallel edges, out-of-range
    /// endpoints and lengths above [`MAX_LENGTH`]. Edge ids follow input order.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Length)>,
    {
        let mut seen = FxHashSet::default();
        let mut list = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v, length) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if length > MAX_LENGTH {
                return Err(Error::LengthTooLarge(length));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u, v));
            }
            let id = EdgeId(list.len() as u32);
            adjacency[u.index()].push((v, id));
            adjacency[v.index()].push((u, id));
            list.push(Edge { u, v, length });
        }
        Ok(Self {
            n,
            edges: list,
            adjacency,
        })
    }

    /// Convenience constructor over raw indices.
    pub fn from_edges(n: usize, edges: &[(u32, u32, Length)]) -> Result<Self> {
        Self::new(
            n,
            edges.iter().map(|&(u, v, l)| (VertexId(u), VertexId(v), l)),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n as u32).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v.index()]
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.adjacency
            .get(u.index())?
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        check_vertex(v, self.n)
    }

    /// Same structure with every length multiplied by `factor`.
    pub fn scaled(&self, factor: Length) -> Result<Self> {
        Self::new(
            self.n,
            self.edges
                .iter()
                .map(|e| (e.u, e.v, e.length.saturating_mul(factor))),
        )
    }
}

/// A mixed graph `(V, A ∪ E)`: arcs are ordered pairs, edges unordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedGraph {
    n: usize,
    arcs: Vec<(VertexId, VertexId)>,
    edges: Vec<(VertexId, VertexId)>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
    edge_adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

impl MixedGraph {
    pub fn new(
        n: usize,
        arcs: Vec<(VertexId, VertexId)>,
        edges: Vec<(VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        let mut edge_adjacency = vec![Vec::new(); n];
        for (i, &(u, v)) in arcs.iter().enumerate() {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            out_arcs[u.index()].push(ArcId(i as u32));
            in_arcs[v.index()].push(ArcId(i as u32));
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edge_adjacency[u.index()].push((v, EdgeId(i as u32)));
            edge_adjacency[v.index()].push((u, EdgeId(i as u32)));
        }
        Ok(Self {
            n,
            arcs,
            edges,
            out_arcs,
            in_arcs,
            edge_adjacency,
        })
    }

    pub fn from_raw(n: usize, arcs: &[(u32, u32)], edges: &[(u32, u32)]) -> Result<Self> {
        Self::new(
            n,
            arcs.iter()
                .map(|&(u, v)| (VertexId(u), VertexId(v)))
                .collect(),
            edges
                .iter()
                .map(|&(u, v)| (VertexId(u), VertexId(v)))
                .collect(),
        )
    }

    /// The undirected graph as a mixed graph without arcs; edge ids are kept.
    pub fn from_undirected(graph: &UndirectedGraph) -> Self {
        Self::new(
            graph.vertex_count(),
            Vec::new(),
            graph.edges().iter().map(|e| (e.u, e.v)).collect(),
        )
        .expect("valid undirected graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n as u32).map(VertexId)
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn arc(&self, id: ArcId) -> (VertexId, VertexId) {
        self.arcs[id.index()]
    }

    pub fn edge(&self, id: EdgeId) -> (VertexId, VertexId) {
        self.edges[id.index()]
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> {
        (0..self.arcs.len() as u32).map(ArcId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn links(&self) -> impl Iterator<Item = Link> + '_ {
        self.arc_ids()
            .map(Link::Arc)
            .chain(self.edge_ids().map(Link::Edge))
    }

    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out_arcs[v.index()]
    }

    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.in_arcs[v.index()]
    }

    pub fn edge_neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.edge_adjacency[v.index()]
    }

    /// Endpoints of a link; for an arc in (tail, head) order.
    pub fn endpoints(&self, link: Link) -> (VertexId, VertexId) {
        match link {
            Link::Arc(a) => self.arc(a),
            Link::Edge(e) => self.edge(e),
        }
    }

    /// If `link` can be traversed starting at `from`, the vertex it leads to.
    pub fn traverse(&self, link: Link, from: VertexId) -> Option<VertexId> {
        match link {
            Link::Arc(a) => {
                let (u, v) = self.arc(a);
                (u == from).then_some(v)
            }
            Link::Edge(e) => {
                let (u, v) = self.edge(e);
                if u == from {
                    Some(v)
                } else if v == from {
                    Some(u)
                } else {
                    None
                }
            }
        }
    }

    /// Moves available from `v`: outgoing arcs and incident edges.
    pub fn moves(&self, v: VertexId) -> impl Iterator<Item = (Link, VertexId)> + '_ {
        self.out_arcs(v)
            .iter()
            .map(move |&a| (Link::Arc(a), self.arc(a).1))
            .chain(
                self.edge_neighbors(v)
                    .iter()
                    .map(|&(w, e)| (Link::Edge(e), w)),
            )
    }

    /// The subgraph induced by `vertices` with local ids `0..vertices.len()`.
    /// With `with_outside`, one extra isolated vertex is appended to stand in
    /// for every vertex outside the set.
    pub fn induced(&self, vertices: &[VertexId], with_outside: bool) -> Subgraph {
        let mut to_local = FxHashMap::default();
        for (i, &v) in vertices.iter().enumerate() {
            to_local.insert(v, VertexId(i as u32));
        }
        let mut arcs = Vec::new();
        let mut local_arcs = Vec::new();
        for &v in vertices {
            for &a in self.out_arcs(v) {
                let (_, head) = self.arc(a);
                if let Some(&h) = to_local.get(&head) {
                    arcs.push(a);
                    local_arcs.push((to_local[&v], h));
                }
            }
        }
        let mut edges = Vec::new();
        let mut local_edges = Vec::new();
        for &v in vertices {
            for &(w, e) in self.edge_neighbors(v) {
                if let Some(&lw) = to_local.get(&w) {
                    // visit each edge once, from its smaller local endpoint
                    let lv = to_local[&v];
                    if lv < lw {
                        edges.push(e);
                        local_edges.push((lv, lw));
                    }
                }
            }
        }
        let n = vertices.len() + usize::from(with_outside);
        let graph = MixedGraph::new(n, local_arcs, local_edges)
            .expect("induced subgraph of a valid graph is valid");
        Subgraph {
            graph,
            vertices: vertices.to_vec(),
            arcs,
            edges,
            to_local,
            outside: with_outside.then_some(VertexId(vertices.len() as u32)),
        }
    }
}

/// An induced subgraph together with its local/global id maps.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: MixedGraph,
    /// local vertex id -> global vertex id (the outside vertex is not listed)
    pub vertices: Vec<VertexId>,
    pub arcs: Vec<ArcId>,
    pub edges: Vec<EdgeId>,
    to_local: FxHashMap<VertexId, VertexId>,
    pub outside: Option<VertexId>,
}

impl Subgraph {
    pub fn local(&self, global: VertexId) -> Option<VertexId> {
        self.to_local.get(&global).copied()
    }

    /// Local id, falling back to the outside vertex.
    pub fn local_or_outside(&self, global: VertexId) -> Option<VertexId> {
        self.local(global).or(self.outside)
    }

    pub fn contains(&self, global: VertexId) -> bool {
        self.to_local.contains_key(&global)
    }

    pub fn global(&self, local: VertexId) -> Option<VertexId> {
        self.vertices.get(local.index()).copied()
    }

    pub fn global_link(&self, local: Link) -> Link {
        match local {
            Link::Arc(a) => Link::Arc(self.arcs[a.index()]),
            Link::Edge(e) => Link::Edge(self.edges[e.index()]),
        }
    }
}

/// A partition of `0..n` into cells numbered by their smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    cell_of: Vec<usize>,
    cells: Vec<Vec<VertexId>>,
}

impl Partition {
    /// Builds the partition from an explicit cell assignment.
    pub fn from_cells(n: usize, cells: Vec<Vec<VertexId>>) -> Self {
        let mut cell_of = vec![usize::MAX; n];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v.index()] = c;
            }
        }
        Self { cell_of, cells }
    }

    fn from_union_find(n: usize, uf: &UnionFind<usize>) -> Self {
        let mut cell_of = vec![usize::MAX; n];
        let mut cells: Vec<Vec<VertexId>> = Vec::new();
        let mut cell_of_root: FxHashMap<usize, usize> = FxHashMap::default();
        // ascending scan: a cell is numbered when its smallest vertex is met
        for (v, slot) in cell_of.iter_mut().enumerate() {
            let root = uf.find(v);
            let c = *cell_of_root.entry(root).or_insert_with(|| {
                cells.push(Vec::new());
                cells.len() - 1
            });
            *slot = c;
            cells[c].push(VertexId(v as u32));
        }
        Self { cell_of, cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Vec<VertexId>] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &[VertexId] {
        &self.cells[c]
    }

    pub fn cell_of(&self, v: VertexId) -> usize {
        self.cell_of[v.index()]
    }

    /// Checks the cells are disjoint and cover `0..n`.
    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.cell_of.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                if v.index() >= seen.len() || seen[v.index()] || self.cell_of[v.index()] != c {
                    return false;
                }
                seen[v.index()] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn partition_from_pairs<I>(n: usize, pairs: I) -> Partition
where
    I: IntoIterator<Item = (VertexId, VertexId)>,
{
    let mut uf = UnionFind::new(n);
    for (u, v) in pairs {
        uf.union(u.index(), v.index());
    }
    Partition::from_union_find(n, &uf)
}

/// Connected components of the whole undirected graph.
pub fn connected_components(graph: &UndirectedGraph) -> Partition {
    connected_components_by(graph, |_| true)
}

/// Connected components of the spanning subgraph keeping the edges accepted by `keep`.
pub fn connected_components_by<F>(graph: &UndirectedGraph, keep: F) -> Partition
where
    F: Fn(EdgeId) -> bool,
{
    partition_from_pairs(
        graph.vertex_count(),
        graph
            .edge_ids()
            .filter(|&e| keep(e))
            .map(|e| (graph.edge(e).u, graph.edge(e).v)),
    )
}

/// Components of the undirected shadow of the selected arcs and edges.
pub fn weakly_connected_components<FA, FE>(
    graph: &MixedGraph,
    keep_arc: FA,
    keep_edge: FE,
) -> Partition
where
    FA: Fn(ArcId) -> bool,
    FE: Fn(EdgeId) -> bool,
{
    let arcs = graph
        .arc_ids()
        .filter(|&a| keep_arc(a))
        .map(|a| graph.arc(a));
    let edges = graph
        .edge_ids()
        .filter(|&e| keep_edge(e))
        .map(|e| graph.edge(e));
    partition_from_pairs(graph.vertex_count(), arcs.chain(edges))
}

/// Components of `(V, E)` of a mixed graph.
pub fn edge_components(graph: &MixedGraph) -> Partition {
    weakly_connected_components(graph, |_| false, |_| true)
}

/// True iff contracting every edge component leaves a loop-free DAG.
pub fn is_weakly_acyclic(graph: &MixedGraph) -> bool {
    contract_and_topo_order(graph, &edge_components(graph)).is_ok()
}

/// Topological order of the cells of `partition` in the contraction of `graph`.
pub fn contract_and_topo_order(graph: &MixedGraph, partition: &Partition) -> Result<Vec<usize>> {
    contract_and_topo_order_with(graph, partition, |_| true)
}

/// As [`contract_and_topo_order`], considering only arcs accepted by `keep_arc`.
/// Ties are broken by the smallest vertex of each cell.
pub fn contract_and_topo_order_with<F>(
    graph: &MixedGraph,
    partition: &Partition,
    keep_arc: F,
) -> Result<Vec<usize>>
where
    F: Fn(ArcId) -> bool,
{
    let h = partition.len();
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); h];
    let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); h];
    let mut indegree = vec![0usize; h];
    for a in graph.arc_ids().filter(|&a| keep_arc(a)) {
        let (u, v) = graph.arc(a);
        let (cu, cv) = (partition.cell_of(u), partition.cell_of(v));
        if cu == cv {
            return Err(Error::NotWeaklyAcyclic { cycle: vec![cu] });
        }
        successors[cu].push(cv);
        predecessors[cv].push(cu);
        indegree[cv] += 1;
    }
    let key = |c: usize| partition.cell(c).iter().min().copied();
    let mut ready: BinaryHeap<Reverse<(Option<VertexId>, usize)>> = (0..h)
        .filter(|&c| indegree[c] == 0)
        .map(|c| Reverse((key(c), c)))
        .collect();
    let mut order = Vec::with_capacity(h);
    while let Some(Reverse((_, c))) = ready.pop() {
        order.push(c);
        for &d in &successors[c] {
            indegree[d] -= 1;
            if indegree[d] == 0 {
                ready.push(Reverse((key(d), d)));
            }
        }
    }
    if order.len() == h {
        return Ok(order);
    }
    // Every leftover cell has a leftover predecessor: walk backwards until a repeat.
    let start = (0..h).find(|&c| indegree[c] > 0).expect("leftover cell");
    let mut position = vec![usize::MAX; h];
    let mut walk = Vec::new();
    let mut c = start;
    while position[c] == usize::MAX {
        position[c] = walk.len();
        walk.push(c);
        c = *predecessors[c]
            .iter()
            .find(|&&p| indegree[p] > 0)
            .expect("leftover cell has a leftover predecessor");
    }
    let mut cycle = walk[position[c]..].to_vec();
    cycle.reverse();
    Err(Error::NotWeaklyAcyclic { cycle })
}
