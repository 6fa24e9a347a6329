//! Disjoint paths in weakly acyclic mixed graphs.
//!
//! The edge components are processed in a topological order of the
//! contracted graph. Starting from the identity, the relation is extended
//! once per component: first by the arcs entering the component (each path
//! takes at most one, and never the same one), then by the undirected
//! disjoint-paths relation of the component itself. Because the three pieces
//! use pairwise disjoint arc/edge sets, composing them yields disjoint paths
//! in the union, and every pair of disjoint paths splits this way.

use std::sync::Arc;

use rayon::prelude::*;

use crate::dpp_undirected::{Exhaustive, TwoPathsSolver};
use crate::error::{Error, Result};
use crate::graph::{
    contract_and_topo_order, edge_components, Link, MixedGraph, Subgraph, UndirectedGraph, VertexId,
};
use crate::relation::{
    compose, ArcRef, DeltaForward, DisjointMode, Lifted, Pair, Relation2, Semantics,
};

/// Knobs for [`disjoint_paths_relation_with`].
#[derive(Clone, Copy)]
pub struct MixedOptions<'a> {
    pub witnesses: bool,
    pub solver: &'a dyn TwoPathsSolver,
    /// Only keep left elements whose first coordinate is listed. Entries of
    /// the kept rows are unaffected; the default computes every row.
    pub anchors: Option<&'a [VertexId]>,
}

static DEFAULT_SOLVER: Exhaustive = Exhaustive {
    budget: crate::dpp_undirected::DEFAULT_PATH_BUDGET,
};

impl Default for MixedOptions<'_> {
    fn default() -> Self {
        Self {
            witnesses: true,
            solver: &DEFAULT_SOLVER,
            anchors: None,
        }
    }
}

/// State of the dynamic program after one component has been absorbed.
pub struct Iteration<'a> {
    pub index: usize,
    pub cell: &'a [VertexId],
    pub relation: &'a Relation2,
}

/// The undirected relation of one edge component, on the component plus an
/// outside stand-in vertex.
pub(crate) struct ComponentRelation {
    pub frame: Arc<Subgraph>,
    pub relation: Relation2,
}

pub(crate) fn component_relation(
    graph: &MixedGraph,
    cell: &[VertexId],
    mode: DisjointMode,
    witnesses: bool,
    solver: &dyn TwoPathsSolver,
) -> Result<ComponentRelation> {
    let frame = graph.induced(cell, true);
    debug_assert_eq!(frame.graph.arc_count(), 0, "arc inside an edge component");
    let local = UndirectedGraph::new(
        frame.graph.vertex_count(),
        frame.graph.edges().iter().map(|&(u, v)| (u, v, 0)),
    )?;
    let relation = solver
        .relation(&local, mode, witnesses)
        .map_err(|e| match e {
            Error::ComponentTooLarge { budget, .. } => Error::ComponentTooLarge {
                vertices: cell.len(),
                budget,
            },
            e => e,
        })?;
    Ok(ComponentRelation {
        frame: Arc::new(frame),
        relation,
    })
}

/// The arc/edge-disjoint (or vertex-disjoint) paths relation of a weakly
/// acyclic mixed graph, with default options.
pub fn disjoint_paths_relation(graph: &MixedGraph, mode: DisjointMode) -> Result<Relation2> {
    disjoint_paths_relation_with(graph, mode, &MixedOptions::default(), &mut |_| {})
}

/// As [`disjoint_paths_relation`]; `observe` sees the relation after each component.
pub fn disjoint_paths_relation_with(
    graph: &MixedGraph,
    mode: DisjointMode,
    options: &MixedOptions<'_>,
    observe: &mut dyn FnMut(Iteration<'_>),
) -> Result<Relation2> {
    let partition = edge_components(graph);
    let order = contract_and_topo_order(graph, &partition)?;

    let with_edges: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&c| {
            partition
                .cell(c)
                .iter()
                .any(|&v| !graph.edge_neighbors(v).is_empty())
        })
        .collect();
    let computed: Vec<ComponentRelation> = with_edges
        .par_iter()
        .map(|&c| {
            component_relation(
                graph,
                partition.cell(c),
                mode,
                options.witnesses,
                options.solver,
            )
        })
        .collect::<Result<_>>()?;
    let mut components: Vec<Option<ComponentRelation>> =
        (0..partition.len()).map(|_| None).collect();
    for (c, rel) in with_edges.into_iter().zip(computed) {
        components[c] = Some(rel);
    }

    let vertices: Vec<VertexId> = graph.vertices().collect();
    let firsts: &[VertexId] = options.anchors.unwrap_or(&vertices);
    let mut relation = Relation2::identity_on(
        firsts
            .iter()
            .flat_map(|&a| vertices.iter().map(move |&b| Pair(a, b))),
        Semantics::Forward,
        mode,
        options.witnesses,
    );

    for (index, &c) in order.iter().enumerate() {
        let cell = partition.cell(c);
        let entering: Vec<ArcRef> = cell
            .iter()
            .flat_map(|&v| graph.in_arcs(v))
            .map(|&a| {
                let (tail, head) = graph.arc(a);
                ArcRef {
                    link: Link::Arc(a),
                    tail,
                    head,
                }
            })
            .collect();
        if !entering.is_empty() {
            relation = compose(&relation, &DeltaForward::new(&entering, mode));
        }
        if let Some(component) = &components[c] {
            relation = compose(
                &relation,
                &Lifted {
                    inner: &component.relation,
                    frame: &component.frame,
                },
            );
        }
        observe(Iteration {
            index,
            cell,
            relation: &relation,
        });
    }
    Ok(relation)
}
