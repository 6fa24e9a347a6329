//! The line-oriented instance format.
//!
//! ```text
//! c comment (also '#')
//! p dspp <n> <m>
//! e <u> <v> <len>          (m lines, 1-indexed vertices)
//! q <s1> <t1> <s2> <t2>    (any number)
//! m vertex                 (optional; default edge)
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::dspp2::Query;
use crate::graph::{Length, UndirectedGraph, VertexId, MAX_LENGTH};
use crate::relation::DisjointMode;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// A parsed instance file. All queries share `mode`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub graph: UndirectedGraph,
    pub queries: Vec<Query>,
    pub mode: DisjointMode,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(VertexId, VertexId, Length)> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut queries: Vec<(u32, u32, u32, u32)> = Vec::new();
    let mut mode = DisjointMode::Edge;
    let mut last_line = 0;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        last_line = line;
        let fail = |message: String| ParseError { line, message };
        let mut words = raw.split_whitespace();
        let Some(tag) = words.next() else { continue };
        if tag.starts_with('#') || tag == "c" {
            continue;
        }
        let fields: Vec<&str> = words.collect();
        let arity = |k: usize| {
            if fields.len() == k {
                Ok(())
            } else {
                Err(fail(format!(
                    "'{tag}' expects {k} fields, found {}",
                    fields.len()
                )))
            }
        };
        let n = header.map(|h| h.0);
        let vertex = |s: &str| -> Result<u32, ParseError> {
            let n = n.ok_or_else(|| fail("missing 'p dspp' header".into()))?;
            let v: u64 = s
                .parse()
                .map_err(|_| fail(format!("invalid vertex '{s}'")))?;
            if v == 0 || v > n as u64 {
                return Err(fail(format!("vertex {v} out of range 1..={n}")));
            }
            Ok(v as u32 - 1)
        };
        match tag {
            "p" => {
                if header.is_some() {
                    return Err(fail("duplicate header".into()));
                }
                arity(3)?;
                if fields[0] != "dspp" {
                    return Err(fail(format!("unknown problem '{}'", fields[0])));
                }
                let count = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| fail(format!("invalid count '{s}'")))
                };
                let n = count(fields[1])?;
                if n == 0 || n > u32::MAX as usize {
                    return Err(fail(format!("vertex count {n} out of range")));
                }
                header = Some((n, count(fields[2])?));
            }
            "e" => {
                arity(3)?;
                let u = vertex(fields[0])?;
                let v = vertex(fields[1])?;
                if fields[2].starts_with('-') {
                    return Err(fail(format!("negative length {}", fields[2])));
                }
                let len: Length = fields[2]
                    .parse()
                    .map_err(|_| fail(format!("invalid length '{}'", fields[2])))?;
                if len > MAX_LENGTH {
                    return Err(fail(format!("length {len} exceeds {MAX_LENGTH}")));
                }
                if u == v {
                    return Err(fail(format!("self-loop at vertex {}", u + 1)));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(fail(format!("duplicate edge {} {}", u + 1, v + 1)));
                }
                edges.push((VertexId(u), VertexId(v), len));
            }
            "q" => {
                arity(4)?;
                queries.push((
                    vertex(fields[0])?,
                    vertex(fields[1])?,
                    vertex(fields[2])?,
                    vertex(fields[3])?,
                ));
            }
            "m" => {
                arity(1)?;
                mode = match fields[0] {
                    "vertex" => DisjointMode::Vertex,
                    "edge" => DisjointMode::Edge,
                    other => return Err(fail(format!("unknown mode '{other}'"))),
                };
            }
            other => return Err(fail(format!("unknown line type '{other}'"))),
        }
    }

    let Some((n, m)) = header else {
        return Err(ParseError {
            line: last_line.max(1),
            message: "missing 'p dspp' header".into(),
        });
    };
    if edges.len() != m {
        return Err(ParseError {
            line: last_line.max(1),
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    let graph = UndirectedGraph::new(n, edges).map_err(|e| ParseError {
        line: last_line.max(1),
        message: e.to_string(),
    })?;
    let queries = queries
        .into_iter()
        .map(|(s1, t1, s2, t2)| Query::new(s1, t1, s2, t2, mode))
        .collect();
    Ok(InstanceFile {
        graph,
        queries,
        mode,
    })
}

pub fn emit_instance(file: &InstanceFile) -> String {
    let g = &file.graph;
    let mut out = String::new();
    let _ = writeln!(out, "p dspp {} {}", g.vertex_count(), g.edge_count());
    if file.mode == DisjointMode::Vertex {
        out.push_str("m vertex\n");
    }
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u.0 + 1, e.v.0 + 1, e.length);
    }
    for q in &file.queries {
        let _ = writeln!(
            out,
            "q {} {} {} {}",
            q.s.0 .0 + 1,
            q.t.0 .0 + 1,
            q.s.1 .0 + 1,
            q.t.1 .0 + 1
        );
    }
    out
}
