//! Small named instances used by tests, the CLI self-test and the docs.

use crate::dspp2::Query;
use crate::graph::UndirectedGraph;
use crate::relation::DisjointMode;

/// Vertex ids of [`fig2`].
pub mod fig2_ids {
    pub const S1: u32 = 0;
    pub const S2: u32 = 1;
    pub const T1: u32 = 2;
    pub const T2: u32 = 3;
    pub const V1: u32 = 4;
    pub const V2: u32 = 5;
    pub const V3: u32 = 6;
    pub const V4: u32 = 7;
}

/// An 8-vertex, 15-edge instance with zero-length edges, three conflicting
/// edges and a feasible query `(s1, t1), (s2, t2)`.
pub fn fig2() -> (UndirectedGraph, Query) {
    use fig2_ids::*;
    let edges = [
        (S2, V2, 1),
        (S2, V1, 1),
        (S2, S1, 1),
        (V2, V3, 1),
        (V2, T1, 1),
        (V1, T1, 1),
        (V3, S1, 1),
        (V3, T2, 1),
        (S1, V4, 1),
        (V4, T2, 1),
        (T2, T1, 1),
        (V2, V1, 0),
        (V3, V4, 0),
        (S1, V2, 3),
        (T1, V3, 3),
    ];
    let graph = UndirectedGraph::from_edges(8, &edges).expect("valid fixture");
    (graph, Query::new(S1, T1, S2, T2, DisjointMode::Edge))
}
