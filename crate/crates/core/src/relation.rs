//! Binary relations on ordered vertex pairs.
//!
//! An entry `(v, w)` of a [`Relation2`] states that two disjoint paths connect
//! the coordinates of `v` and `w`. With [`Semantics::Forward`] both paths run
//! `v_i -> w_i`. With [`Semantics::Opposed`] the first path runs `v_1 -> w_1`
//! while the second runs backwards, `w_2 -> v_2`.
//!
//! Relations are composed left to right: `compose(r, s)` relates `u` to `w`
//! when `u r v` and `v s w` for some middle `v`. Each entry may carry one
//! [`Witness`]. Witnesses are shared trees (chains of sub-witnesses), so a
//! composition step costs O(1) per entry regardless of path length. When
//! several middles are available, the smallest one (in pair order) supplies
//! the witness, which keeps the output deterministic.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::graph::{Link, MixedGraph, Subgraph, VertexId};

/// Which notion of disjointness the paths satisfy.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum DisjointMode {
    /// No shared arc or edge.
    #[default]
    Edge,
    /// No shared vertex, endpoints included.
    Vertex,
}

impl fmt::Display for DisjointMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisjointMode::Edge => "edge",
            DisjointMode::Vertex => "vertex",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Forward,
    Opposed,
}

/// An ordered pair of vertices, one per path.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair(pub VertexId, pub VertexId);

impl Pair {
    pub fn new(a: u32, b: u32) -> Self {
        Pair(VertexId(a), VertexId(b))
    }

    pub fn is_distinct(self) -> bool {
        self.0 != self.1
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// A path given by its start vertex and the `(link, next vertex)` steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    start: VertexId,
    steps: Vec<(Link, VertexId)>,
}

impl Path {
    pub fn empty(at: VertexId) -> Self {
        Self {
            start: at,
            steps: Vec::new(),
        }
    }

    pub fn new(start: VertexId, steps: Vec<(Link, VertexId)>) -> Self {
        Self { start, steps }
    }

    pub fn single(from: VertexId, link: Link, to: VertexId) -> Self {
        Self {
            start: from,
            steps: vec![(link, to)],
        }
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.steps.last().map_or(self.start, |&(_, v)| v)
    }

    pub fn steps(&self) -> &[(Link, VertexId)] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn links(&self) -> impl Iterator<Item = Link> + '_ {
        self.steps.iter().map(|&(l, _)| l)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().map(|&(_, v)| v))
    }

    pub fn push(&mut self, link: Link, to: VertexId) {
        self.steps.push((link, to));
    }

    pub(crate) fn pop_step(&mut self) -> Option<(Link, VertexId)> {
        self.steps.pop()
    }

    /// Appends `tail`, which must start where `self` ends.
    pub fn append(&mut self, tail: Path) {
        assert_eq!(self.end(), tail.start, "paths do not meet");
        self.steps.extend(tail.steps);
    }
}

/// The two paths certifying one relation entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathPair {
    pub first: Path,
    pub second: Path,
}

/// A certificate for one entry. `Empty` certifies an identity entry.
#[derive(Clone)]
pub enum Witness {
    Empty,
    Node(Arc<WitnessNode>),
}

#[doc(hidden)]
pub enum WitnessNode {
    Paths(PathPair),
    Chain {
        middle: Pair,
        earlier: Witness,
        later: Witness,
    },
    /// A forward entry `((v1, w2), (w1, v2))` read as the opposed entry `(v, w)`.
    Reindexed(Witness),
    /// A witness of a relation computed on a local subgraph.
    Mapped {
        inner: Witness,
        frame: Arc<Subgraph>,
    },
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Empty => f.write_str("Witness::Empty"),
            Witness::Node(_) => f.write_str("Witness::Node(..)"),
        }
    }
}

impl Witness {
    pub fn paths(pair: PathPair) -> Self {
        Witness::Node(Arc::new(WitnessNode::Paths(pair)))
    }

    /// Witness for `left -> right` from `left -> middle` and `middle -> right`.
    pub fn chain(earlier: Witness, middle: Pair, later: Witness) -> Self {
        match (&earlier, &later) {
            (Witness::Empty, _) => later,
            (_, Witness::Empty) => earlier,
            _ => Witness::Node(Arc::new(WitnessNode::Chain {
                middle,
                earlier,
                later,
            })),
        }
    }

    pub fn reindexed(inner: Witness) -> Self {
        match inner {
            Witness::Empty => Witness::Empty,
            inner => Witness::Node(Arc::new(WitnessNode::Reindexed(inner))),
        }
    }

    pub fn mapped(inner: Witness, frame: Arc<Subgraph>) -> Self {
        match inner {
            Witness::Empty => Witness::Empty,
            inner => Witness::Node(Arc::new(WitnessNode::Mapped { inner, frame })),
        }
    }

    /// Expands the witness of entry `(left, right)` into explicit paths.
    pub fn materialize(&self, semantics: Semantics, left: Pair, right: Pair) -> PathPair {
        match self {
            Witness::Empty => PathPair {
                first: Path::empty(left.0),
                second: Path::empty(left.1),
            },
            Witness::Node(node) => match node.as_ref() {
                WitnessNode::Paths(p) => p.clone(),
                WitnessNode::Chain {
                    middle,
                    earlier,
                    later,
                } => {
                    let a = earlier.materialize(semantics, left, *middle);
                    let b = later.materialize(semantics, *middle, right);
                    let mut first = a.first;
                    first.append(b.first);
                    let second = match semantics {
                        Semantics::Forward => {
                            let mut s = a.second;
                            s.append(b.second);
                            s
                        }
                        Semantics::Opposed => {
                            let mut s = b.second;
                            s.append(a.second);
                            s
                        }
                    };
                    PathPair { first, second }
                }
                WitnessNode::Reindexed(inner) => inner.materialize(
                    Semantics::Forward,
                    Pair(left.0, right.1),
                    Pair(right.0, left.1),
                ),
                WitnessNode::Mapped { inner, frame } => {
                    let outside = frame.outside;
                    let to_local = |v: VertexId| {
                        frame
                            .local_or_outside(v)
                            .expect("witness endpoint outside a frame without stand-in")
                    };
                    let local_left = Pair(to_local(left.0), to_local(left.1));
                    let local_right = Pair(to_local(right.0), to_local(right.1));
                    let local = inner.materialize(semantics, local_left, local_right);
                    let second_start = match semantics {
                        Semantics::Forward => left.1,
                        Semantics::Opposed => right.1,
                    };
                    let lift = |p: Path, fallback: VertexId| -> Path {
                        if Some(p.start) == outside {
                            debug_assert!(p.is_empty());
                            return Path::empty(fallback);
                        }
                        Path {
                            start: frame.global(p.start).expect("local vertex"),
                            steps: p
                                .steps
                                .into_iter()
                                .map(|(l, v)| {
                                    (frame.global_link(l), frame.global(v).expect("local vertex"))
                                })
                                .collect(),
                        }
                    };
                    PathPair {
                        first: lift(local.first, left.0),
                        second: lift(local.second, second_start),
                    }
                }
            },
        }
    }
}

/// Anything that can enumerate the entries `(from, w)` of a relation for a given `from`.
pub trait Successors {
    fn for_each_successor(&self, from: Pair, f: &mut dyn FnMut(Pair, Option<&Witness>));

    /// Links usable by the path of the given coordinate (0 or 1).
    fn ground_links(&self, coordinate: usize) -> Vec<Link>;
}

type Row = FxHashMap<Pair, Option<Witness>>;

/// A materialized relation on pairs of vertices.
#[derive(Clone, Debug)]
pub struct Relation2 {
    semantics: Semantics,
    mode: DisjointMode,
    witnesses: bool,
    rows: FxHashMap<Pair, Row>,
    ground: [BTreeSet<Link>; 2],
    len: usize,
}

impl Relation2 {
    pub fn new(semantics: Semantics, mode: DisjointMode, witnesses: bool) -> Self {
        Self {
            semantics,
            mode,
            witnesses,
            rows: FxHashMap::default(),
            ground: [BTreeSet::new(), BTreeSet::new()],
            len: 0,
        }
    }

    /// `{(v, v)}` over `universe²`; in vertex mode only pairs of distinct vertices.
    pub fn identity(
        universe: &[VertexId],
        semantics: Semantics,
        mode: DisjointMode,
        witnesses: bool,
    ) -> Self {
        Self::identity_on(
            universe
                .iter()
                .flat_map(|&a| universe.iter().map(move |&b| Pair(a, b))),
            semantics,
            mode,
            witnesses,
        )
    }

    /// Identity restricted to the given pairs.
    pub fn identity_on<I>(
        pairs: I,
        semantics: Semantics,
        mode: DisjointMode,
        witnesses: bool,
    ) -> Self
    where
        I: IntoIterator<Item = Pair>,
    {
        let mut r = Self::new(semantics, mode, witnesses);
        for p in pairs {
            if mode == DisjointMode::Vertex && !p.is_distinct() {
                continue;
            }
            r.insert(p, p, Witness::Empty);
        }
        r
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn mode(&self) -> DisjointMode {
        self.mode
    }

    pub fn tracks_witnesses(&self) -> bool {
        self.witnesses
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ground(&self, coordinate: usize) -> &BTreeSet<Link> {
        &self.ground[coordinate]
    }

    pub fn extend_ground<I: IntoIterator<Item = Link>>(&mut self, coordinate: usize, links: I) {
        self.ground[coordinate].extend(links);
    }

    /// Inserts an entry unless it is already present; returns whether it was new.
    pub fn insert(&mut self, left: Pair, right: Pair, witness: Witness) -> bool {
        let witness = self.witnesses.then_some(witness);
        let row = self.rows.entry(left).or_default();
        if row.contains_key(&right) {
            return false;
        }
        row.insert(right, witness);
        self.len += 1;
        true
    }

    pub fn contains(&self, left: Pair, right: Pair) -> bool {
        self.rows
            .get(&left)
            .is_some_and(|row| row.contains_key(&right))
    }

    pub fn witness(&self, left: Pair, right: Pair) -> Option<&Witness> {
        self.rows.get(&left)?.get(&right)?.as_ref()
    }

    /// The explicit paths certifying `(left, right)`, if present and tracked.
    pub fn path_pair(&self, left: Pair, right: Pair) -> Option<PathPair> {
        self.witness(left, right)
            .map(|w| w.materialize(self.semantics, left, right))
    }

    pub fn row(&self, left: Pair) -> impl Iterator<Item = (Pair, Option<&Witness>)> {
        self.rows
            .get(&left)
            .into_iter()
            .flat_map(|row| row.iter().map(|(&w, wit)| (w, wit.as_ref())))
    }

    pub fn lefts(&self) -> impl Iterator<Item = Pair> + '_ {
        self.rows.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Pair, Pair)> + '_ {
        self.rows
            .iter()
            .flat_map(|(&l, row)| row.keys().map(move |&r| (l, r)))
    }

    /// All entries, sorted; witnesses are ignored.
    pub fn keys(&self) -> BTreeSet<(Pair, Pair)> {
        self.iter().collect()
    }

    /// Rebuilds every stored witness and checks it against `graph`.
    pub fn validate_witnesses(&self, graph: &MixedGraph) -> Result<(), String> {
        for (left, right) in self.iter() {
            if let Some(paths) = self.path_pair(left, right) {
                validate_path_pair(
                    graph,
                    self.semantics,
                    self.mode,
                    left,
                    right,
                    &paths,
                    Some(&self.ground),
                )
                .map_err(|e| format!("entry {left} -> {right}: {e}"))?;
            }
        }
        Ok(())
    }
}

impl Successors for Relation2 {
    fn for_each_successor(&self, from: Pair, f: &mut dyn FnMut(Pair, Option<&Witness>)) {
        if let Some(row) = self.rows.get(&from) {
            for (&w, wit) in row {
                f(w, wit.as_ref());
            }
        }
    }

    fn ground_links(&self, coordinate: usize) -> Vec<Link> {
        self.ground[coordinate].iter().copied().collect()
    }
}

/// Checks endpoints, traversability, disjointness and (optionally) ground sets.
pub fn validate_path_pair(
    graph: &MixedGraph,
    semantics: Semantics,
    mode: DisjointMode,
    left: Pair,
    right: Pair,
    paths: &PathPair,
    ground: Option<&[BTreeSet<Link>; 2]>,
) -> Result<(), String> {
    let (second_from, second_to) = match semantics {
        Semantics::Forward => (left.1, right.1),
        Semantics::Opposed => (right.1, left.1),
    };
    let expected = [(left.0, right.0), (second_from, second_to)];
    for (i, path) in [&paths.first, &paths.second].into_iter().enumerate() {
        if (path.start(), path.end()) != expected[i] {
            return Err(format!(
                "path {} runs {} -> {}, expected {} -> {}",
                i + 1,
                path.start(),
                path.end(),
                expected[i].0,
                expected[i].1
            ));
        }
        let mut at = path.start();
        for &(link, next) in path.steps() {
            if graph.traverse(link, at) != Some(next) {
                return Err(format!("path {} cannot take {link:?} from {at}", i + 1));
            }
            if let Some(ground) = ground {
                if !ground[i].contains(&link) {
                    return Err(format!(
                        "path {} uses {link:?} outside its ground set",
                        i + 1
                    ));
                }
            }
            at = next;
        }
    }
    match mode {
        DisjointMode::Edge => {
            let first: BTreeSet<Link> = paths.first.links().collect();
            if let Some(l) = paths.second.links().find(|l| first.contains(l)) {
                return Err(format!("paths share {l:?}"));
            }
        }
        DisjointMode::Vertex => {
            let first: BTreeSet<VertexId> = paths.first.vertices().collect();
            if let Some(v) = paths.second.vertices().find(|v| first.contains(v)) {
                return Err(format!("paths share vertex {v}"));
            }
        }
    }
    Ok(())
}

/// `compose(r, s)`: `u` relates to `w` iff `u r v` and `v s w` for some `v`.
///
/// Ground sets of `r` and `s` must be disjoint for the result to be a
/// disjoint-paths relation over their union; callers guarantee this.
pub fn compose<S: Successors + ?Sized>(r: &Relation2, s: &S) -> Relation2 {
    let mut out = Relation2::new(r.semantics, r.mode, r.witnesses);
    for i in 0..2 {
        out.ground[i] = r.ground[i].clone();
        out.ground[i].extend(s.ground_links(i));
    }
    let mut best: FxHashMap<Pair, (Pair, Option<Witness>, Option<Witness>)> = FxHashMap::default();
    for (&u, row) in &r.rows {
        best.clear();
        for (&v, w_uv) in row {
            s.for_each_successor(v, &mut |w, w_vw| match best.get_mut(&w) {
                Some(slot) => {
                    if v < slot.0 {
                        *slot = (v, w_uv.clone(), w_vw.cloned());
                    }
                }
                None => {
                    best.insert(w, (v, w_uv.clone(), w_vw.cloned()));
                }
            });
        }
        if best.is_empty() {
            continue;
        }
        let mut out_row = Row::default();
        out_row.reserve(best.len());
        for (w, (v, a, b)) in best.drain() {
            let witness = match (a, b) {
                (Some(a), Some(b)) if r.witnesses => Some(Witness::chain(a, v, b)),
                _ => None,
            };
            out_row.insert(w, witness);
        }
        out.len += out_row.len();
        out.rows.insert(u, out_row);
    }
    out
}

/// An arc available to a single-arc step relation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ArcRef {
    pub link: Link,
    pub tail: VertexId,
    pub head: VertexId,
}

fn endpoint_sets_disjoint(a: (VertexId, VertexId), b: (VertexId, VertexId)) -> bool {
    a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1
}

/// Step relation where each path stays put or takes one arc, both running forward.
#[derive(Clone, Debug)]
pub struct DeltaForward {
    mode: DisjointMode,
    by_tail: FxHashMap<VertexId, Vec<(Link, VertexId)>>,
    links: Vec<Link>,
}

impl DeltaForward {
    pub fn new(arcs: &[ArcRef], mode: DisjointMode) -> Self {
        let mut by_tail: FxHashMap<VertexId, Vec<(Link, VertexId)>> = FxHashMap::default();
        for a in arcs {
            by_tail.entry(a.tail).or_default().push((a.link, a.head));
        }
        Self {
            mode,
            by_tail,
            links: arcs.iter().map(|a| a.link).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

fn options<'a>(
    at: VertexId,
    moves: Option<&'a Vec<(Link, VertexId)>>,
) -> impl Iterator<Item = (Option<Link>, VertexId)> + 'a {
    std::iter::once((None, at)).chain(moves.into_iter().flatten().map(|&(l, v)| (Some(l), v)))
}

fn step_path(from: VertexId, link: Option<Link>, to: VertexId) -> Path {
    match link {
        Some(l) => Path::single(from, l, to),
        None => Path::empty(from),
    }
}

impl Successors for DeltaForward {
    fn for_each_successor(&self, p: Pair, f: &mut dyn FnMut(Pair, Option<&Witness>)) {
        for (l1, q1) in options(p.0, self.by_tail.get(&p.0)) {
            for (l2, q2) in options(p.1, self.by_tail.get(&p.1)) {
                if l1.is_some() && l1 == l2 {
                    continue;
                }
                if self.mode == DisjointMode::Vertex
                    && !endpoint_sets_disjoint((p.0, q1), (p.1, q2))
                {
                    continue;
                }
                let q = Pair(q1, q2);
                let witness = if l1.is_none() && l2.is_none() {
                    Witness::Empty
                } else {
                    Witness::paths(PathPair {
                        first: step_path(p.0, l1, q1),
                        second: step_path(p.1, l2, q2),
                    })
                };
                f(q, Some(&witness));
            }
        }
    }

    fn ground_links(&self, _coordinate: usize) -> Vec<Link> {
        self.links.clone()
    }
}

/// Step relation for opposed semantics: path 1 may take an arc of `arcs_in`
/// forward (`p1 -> q1`), path 2 may take an arc of `arcs_out` from `q2` back to `p2`.
#[derive(Clone, Debug)]
pub struct DeltaOpposed {
    mode: DisjointMode,
    in_by_tail: FxHashMap<VertexId, Vec<(Link, VertexId)>>,
    out_by_head: FxHashMap<VertexId, Vec<(Link, VertexId)>>,
    links_in: Vec<Link>,
    links_out: Vec<Link>,
}

impl DeltaOpposed {
    pub fn new(arcs_in: &[ArcRef], arcs_out: &[ArcRef], mode: DisjointMode) -> Self {
        let mut in_by_tail: FxHashMap<VertexId, Vec<(Link, VertexId)>> = FxHashMap::default();
        for a in arcs_in {
            in_by_tail.entry(a.tail).or_default().push((a.link, a.head));
        }
        let mut out_by_head: FxHashMap<VertexId, Vec<(Link, VertexId)>> = FxHashMap::default();
        for a in arcs_out {
            out_by_head
                .entry(a.head)
                .or_default()
                .push((a.link, a.tail));
        }
        Self {
            mode,
            in_by_tail,
            out_by_head,
            links_in: arcs_in.iter().map(|a| a.link).collect(),
            links_out: arcs_out.iter().map(|a| a.link).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.links_in.is_empty() && self.links_out.is_empty()
    }
}

impl Successors for DeltaOpposed {
    fn for_each_successor(&self, p: Pair, f: &mut dyn FnMut(Pair, Option<&Witness>)) {
        for (l1, q1) in options(p.0, self.in_by_tail.get(&p.0)) {
            for (l2, q2) in options(p.1, self.out_by_head.get(&p.1)) {
                debug_assert!(l1.is_none() || l1 != l2, "step arc sets overlap");
                if l1.is_some() && l1 == l2 {
                    continue;
                }
                if self.mode == DisjointMode::Vertex
                    && !endpoint_sets_disjoint((p.0, q1), (p.1, q2))
                {
                    continue;
                }
                let q = Pair(q1, q2);
                let witness = if l1.is_none() && l2.is_none() {
                    Witness::Empty
                } else {
                    // path 2 runs q2 -> p2
                    let second = match l2 {
                        Some(l) => Path::single(q2, l, p.1),
                        None => Path::empty(p.1),
                    };
                    Witness::paths(PathPair {
                        first: step_path(p.0, l1, q1),
                        second,
                    })
                };
                f(q, Some(&witness));
            }
        }
    }

    fn ground_links(&self, coordinate: usize) -> Vec<Link> {
        if coordinate == 0 {
            self.links_in.clone()
        } else {
            self.links_out.clone()
        }
    }
}

/// A relation computed on an induced subgraph (with an outside stand-in vertex),
/// lifted to the whole graph: coordinates outside the subgraph stay put.
pub struct Lifted<'a> {
    pub inner: &'a Relation2,
    pub frame: &'a Arc<Subgraph>,
}

impl Successors for Lifted<'_> {
    fn for_each_successor(&self, p: Pair, f: &mut dyn FnMut(Pair, Option<&Witness>)) {
        let (l1, l2) = (self.frame.local(p.0), self.frame.local(p.1));
        if l1.is_none() && l2.is_none() {
            f(p, Some(&Witness::Empty));
            return;
        }
        let outside = self
            .frame
            .outside
            .expect("lifted relation needs an outside stand-in");
        let local = Pair(l1.unwrap_or(outside), l2.unwrap_or(outside));
        for (w, wit) in self.inner.row(local) {
            let lift = |x: VertexId, keep: VertexId| {
                if x == outside {
                    keep
                } else {
                    self.frame.global(x).expect("local vertex")
                }
            };
            let global = Pair(lift(w.0, p.0), lift(w.1, p.1));
            let witness = wit.map(|w| Witness::mapped(w.clone(), Arc::clone(self.frame)));
            f(global, witness.as_ref());
        }
    }

    fn ground_links(&self, coordinate: usize) -> Vec<Link> {
        self.inner
            .ground(coordinate)
            .iter()
            .map(|&l| self.frame.global_link(l))
            .collect()
    }
}

fn materialize_step<S: Successors>(
    step: &S,
    universe: &[VertexId],
    semantics: Semantics,
    mode: DisjointMode,
    witnesses: bool,
) -> Relation2 {
    let mut r = Relation2::new(semantics, mode, witnesses);
    for i in 0..2 {
        r.ground[i].extend(step.ground_links(i));
    }
    for &a in universe {
        for &b in universe {
            let p = Pair(a, b);
            step.for_each_successor(p, &mut |q, w| {
                r.insert(p, q, w.cloned().unwrap_or(Witness::Empty));
            });
        }
    }
    r
}

/// The forward step relation over `arcs`, materialized on `universe²`.
pub fn delta_relation_forward(
    universe: &[VertexId],
    arcs: &[ArcRef],
    mode: DisjointMode,
    witnesses: bool,
) -> Relation2 {
    materialize_step(
        &DeltaForward::new(arcs, mode),
        universe,
        Semantics::Forward,
        mode,
        witnesses,
    )
}

/// The opposed step relation, materialized on `universe²`.
pub fn delta_relation_opposed(
    universe: &[VertexId],
    arcs_in: &[ArcRef],
    arcs_out: &[ArcRef],
    mode: DisjointMode,
    witnesses: bool,
) -> Relation2 {
    materialize_step(
        &DeltaOpposed::new(arcs_in, arcs_out, mode),
        universe,
        Semantics::Opposed,
        mode,
        witnesses,
    )
}

/// Reads a forward relation on a single ground set as an opposed one:
/// `v ⇄ w` iff `(v1, w2) ↠ (w1, v2)`.
pub fn reindex_to_opposed(r: &Relation2) -> Relation2 {
    assert_eq!(
        r.semantics,
        Semantics::Forward,
        "reindexing needs a forward relation"
    );
    let mut out = Relation2::new(Semantics::Opposed, r.mode, r.witnesses);
    out.ground = r.ground.clone();
    for (&left, row) in &r.rows {
        for (&right, wit) in row {
            let v = Pair(left.0, right.1);
            let w = Pair(right.0, left.1);
            let witness = wit.clone().map(Witness::reindexed);
            let row = out.rows.entry(v).or_default();
            if row.insert(w, witness).is_none() {
                out.len += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ArcId, MixedGraph};

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn arc(id: u32, t: u32, h: u32) -> ArcRef {
        ArcRef {
            link: Link::Arc(ArcId(id)),
            tail: v(t),
            head: v(h),
        }
    }

    fn universe(n: u32) -> Vec<VertexId> {
        (0..n).map(v).collect()
    }

    fn single(left: Pair, right: Pair, path: PathPair) -> Relation2 {
        let mut r = Relation2::new(Semantics::Forward, DisjointMode::Edge, true);
        r.insert(left, right, Witness::paths(path));
        r
    }

    #[test]
    fn identity_is_neutral() {
        let g = MixedGraph::from_raw(4, &[(0, 2), (1, 3)], &[]).unwrap();
        let r = delta_relation_forward(
            &universe(4),
            &[arc(0, 0, 2), arc(1, 1, 3)],
            DisjointMode::Edge,
            true,
        );
        let id = Relation2::identity(&universe(4), Semantics::Forward, DisjointMode::Edge, true);
        let composed = compose(&id, &r);
        assert_eq!(composed.keys(), r.keys());
        composed.validate_witnesses(&g).unwrap();
        assert_eq!(compose(&r, &id).keys(), r.keys());
    }

    #[test]
    fn composition_matches_middles() {
        let r = single(
            Pair::new(0, 1),
            Pair::new(2, 3),
            PathPair {
                first: Path::empty(v(0)),
                second: Path::empty(v(1)),
            },
        );
        let s = single(
            Pair::new(2, 3),
            Pair::new(4, 5),
            PathPair {
                first: Path::empty(v(2)),
                second: Path::empty(v(3)),
            },
        );
        let c = compose(&r, &s);
        assert_eq!(
            c.keys().into_iter().collect::<Vec<_>>(),
            vec![(Pair::new(0, 1), Pair::new(4, 5))]
        );
        let s2 = single(
            Pair::new(6, 7),
            Pair::new(4, 5),
            PathPair {
                first: Path::empty(v(6)),
                second: Path::empty(v(7)),
            },
        );
        assert!(compose(&r, &s2).is_empty());
    }

    #[test]
    fn forward_step_examples() {
        let u = universe(4);
        let r = delta_relation_forward(&u, &[arc(0, 0, 1)], DisjointMode::Edge, true);
        for x in 0..4 {
            assert!(r.contains(Pair::new(0, x), Pair::new(1, x)));
            assert!(r.contains(Pair::new(x, x), Pair::new(x, x)));
        }
        assert!(!r.contains(Pair::new(0, 0), Pair::new(1, 1)));

        let r = delta_relation_forward(&u, &[arc(0, 0, 1), arc(1, 2, 3)], DisjointMode::Edge, true);
        assert!(r.contains(Pair::new(0, 2), Pair::new(1, 3)));
        let g = MixedGraph::from_raw(4, &[(0, 1), (2, 3)], &[]).unwrap();
        r.validate_witnesses(&g).unwrap();
    }

    #[test]
    fn opposed_step_examples() {
        let u = universe(4);
        let r = delta_relation_opposed(
            &u,
            &[arc(0, 0, 1)],
            &[arc(1, 2, 3)],
            DisjointMode::Edge,
            true,
        );
        // path 1 is 0 -> 1, path 2 is 2 -> 3 read from q2 = 2 back to p2 = 3
        assert!(r.contains(Pair::new(0, 3), Pair::new(1, 2)));
        let g = MixedGraph::from_raw(4, &[(0, 1), (2, 3)], &[]).unwrap();
        r.validate_witnesses(&g).unwrap();

        let empty = delta_relation_opposed(&u, &[], &[], DisjointMode::Edge, true);
        assert_eq!(empty.len(), 16);
        assert!(empty.iter().all(|(a, b)| a == b));

        let only_in = delta_relation_opposed(&u, &[arc(0, 0, 1)], &[], DisjointMode::Edge, true);
        for x in 0..4 {
            assert!(only_in.contains(Pair::new(0, x), Pair::new(1, x)));
        }
    }

    #[test]
    fn vertex_mode_step_requires_disjoint_endpoints() {
        let u = universe(4);
        let r = delta_relation_forward(&u, &[arc(0, 0, 1)], DisjointMode::Vertex, true);
        assert!(r.contains(Pair::new(0, 2), Pair::new(1, 2)));
        assert!(!r.contains(Pair::new(0, 1), Pair::new(1, 1)));
        assert!(!r.contains(Pair::new(2, 2), Pair::new(2, 2)));
    }

    #[test]
    fn reindex_identity_and_single_arc() {
        let u = universe(3);
        let id = Relation2::identity(&u, Semantics::Forward, DisjointMode::Edge, true);
        let op = reindex_to_opposed(&id);
        assert_eq!(op.semantics(), Semantics::Opposed);
        assert!(op.contains(Pair::new(0, 1), Pair::new(0, 1)));

        // arc 0 -> 1, vertex 2 isolated: forward (0,2) -> (1,2) becomes opposed (0,2) -> (1,2)
        let fwd = delta_relation_forward(&u, &[arc(0, 0, 1)], DisjointMode::Edge, true);
        let op = reindex_to_opposed(&fwd);
        assert!(op.contains(Pair::new(0, 2), Pair::new(1, 2)));
        // forward (0,0) -> (1,1)? absent, so opposed (0,1) -> (1,0) is absent
        assert!(!op.contains(Pair::new(0, 1), Pair::new(1, 0)));
        let g = MixedGraph::from_raw(3, &[(0, 1)], &[]).unwrap();
        op.validate_witnesses(&g).unwrap();
    }

    #[test]
    fn smallest_middle_supplies_the_witness() {
        // two routes 0 -> 3: via 1 and via 2
        let g = MixedGraph::from_raw(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], &[]).unwrap();
        let u = universe(4);
        let first =
            delta_relation_forward(&u, &[arc(0, 0, 1), arc(1, 0, 2)], DisjointMode::Edge, true);
        let second = DeltaForward::new(&[arc(2, 1, 3), arc(3, 2, 3)], DisjointMode::Edge);
        let c = compose(&first, &second);
        let paths = c.path_pair(Pair::new(0, 0), Pair::new(3, 0)).unwrap();
        assert_eq!(
            paths.first.vertices().collect::<Vec<_>>(),
            vec![v(0), v(1), v(3)]
        );
        c.validate_witnesses(&g).unwrap();
    }

    #[test]
    fn opposed_chain_concatenates_second_path_backwards() {
        // 0 -A-> 1 -B-> 2 for path 1; path 2 uses 5 -C-> 4 -D-> 3
        let g = MixedGraph::from_raw(6, &[(0, 1), (1, 2), (5, 4), (4, 3)], &[]).unwrap();
        let u = universe(6);
        let s1 = delta_relation_opposed(
            &u,
            &[arc(0, 0, 1)],
            &[arc(3, 4, 3)],
            DisjointMode::Edge,
            true,
        );
        let s2 = DeltaOpposed::new(&[arc(1, 1, 2)], &[arc(2, 5, 4)], DisjointMode::Edge);
        let c = compose(&s1, &s2);
        let (l, r) = (Pair::new(0, 3), Pair::new(2, 5));
        assert!(c.contains(l, r));
        let p = c.path_pair(l, r).unwrap();
        assert_eq!(
            p.second.vertices().collect::<Vec<_>>(),
            vec![v(5), v(4), v(3)]
        );
        c.validate_witnesses(&g).unwrap();
    }
}
