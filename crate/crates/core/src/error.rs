use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: VertexId, count: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(VertexId, VertexId),

    #[error("edge length {0} exceeds the supported maximum {max}", max = crate::graph::MAX_LENGTH)]
    LengthTooLarge(u64),

    /// Contraction of the edge components leaves a loop or a directed cycle.
    /// `cycle` lists the offending cells in cycle order (a single cell for a loop).
    #[error("graph is not weakly acyclic (cycle through {} contracted cell(s))", cycle.len())]
    NotWeaklyAcyclic { cycle: Vec<usize> },

    #[error(
        "component with {vertices} vertices exceeds the search budget of {budget} enumerated paths"
    )]
    ComponentTooLarge { vertices: usize, budget: u64 },

    #[error("path enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("cannot place {edges} edges in a simple graph on {vertices} vertices")]
    InfeasibleEdgeCount { vertices: usize, edges: usize },

    #[error("invalid generator argument: {0}")]
    InvalidArgument(String),

    /// Signals a bug in this library, never a bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
