//! Reader and writer for the line-oriented graph transaction format.
//!
//! ```text
//! # comment
//! t # <graph-id>
//! v <vid> <label>
//! e <vid> <vid> <label>
//! ```
//!
//! Vertex ids restart at 0 in each graph and must appear in order.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{GraphError, ParseError, ParseErrorKind};
use crate::graph::{Label, LabelTable, LabeledGraph};

/// A graph together with its id from the `t` header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphRecord {
    pub id: String,
    pub graph: LabeledGraph,
}

struct Pending {
    id: String,
    header_line: usize,
    labels: Vec<Label>,
    edges: Vec<(usize, usize, Label)>,
    seen: HashSet<(usize, usize)>,
}

impl Pending {
    fn finish(self) -> Result<GraphRecord, ParseError> {
        let graph = LabeledGraph::new(self.labels, &self.edges).map_err(|e| ParseError {
            line: self.header_line,
            kind: match e {
                GraphError::SelfLoop(u) => ParseErrorKind::SelfLoop(u),
                GraphError::DuplicateEdge(u, v) => ParseErrorKind::DuplicateEdge(u, v),
                GraphError::UnknownVertex(u) => ParseErrorKind::UnknownVertex(u),
            },
        })?;
        Ok(GraphRecord { id: self.id, graph })
    }
}

/// Parses a whole database, interning labels into `labels`.
pub fn parse_graph_db(text: &str, labels: &mut LabelTable) -> Result<Vec<GraphRecord>, ParseError> {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    let mut current: Option<Pending> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |kind| ParseError { line: line_no, kind };
        let malformed = || err(ParseErrorKind::Malformed(line.to_owned()));
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["t", "#", id] => {
                if let Some(done) = current.take() {
                    out.push(done.finish()?);
                }
                if !ids.insert(id.to_string()) {
                    return Err(err(ParseErrorKind::DuplicateGraph(id.to_string())));
                }
                current = Some(Pending {
                    id: id.to_string(),
                    header_line: line_no,
                    labels: Vec::new(),
                    edges: Vec::new(),
                    seen: HashSet::new(),
                });
            }
            ["v", vid, label] => {
                let g = current.as_mut().ok_or_else(|| err(ParseErrorKind::NoGraph))?;
                let vid: usize = vid.parse().map_err(|_| malformed())?;
                let expected = g.labels.len();
                if vid < expected {
                    return Err(err(ParseErrorKind::DuplicateVertex(vid)));
                }
                if vid > expected {
                    return Err(err(ParseErrorKind::VertexOutOfSequence { expected, found: vid }));
                }
                g.labels.push(labels.intern(label));
            }
            ["e", a, b, label] => {
                let g = current.as_mut().ok_or_else(|| err(ParseErrorKind::NoGraph))?;
                let a: usize = a.parse().map_err(|_| malformed())?;
                let b: usize = b.parse().map_err(|_| malformed())?;
                for x in [a, b] {
                    if x >= g.labels.len() {
                        return Err(err(ParseErrorKind::UnknownVertex(x)));
                    }
                }
                if a == b {
                    return Err(err(ParseErrorKind::SelfLoop(a)));
                }
                if !g.seen.insert((a.min(b), a.max(b))) {
                    return Err(err(ParseErrorKind::DuplicateEdge(a.min(b), a.max(b))));
                }
                g.edges.push((a, b, labels.intern(label)));
            }
            _ => return Err(malformed()),
        }
    }
    if let Some(done) = current.take() {
        out.push(done.finish()?);
    }
    Ok(out)
}

/// Serializes graphs in the transaction format, edges in canonical `u < v` order.
pub fn write_graph_db<'a>(records: impl IntoIterator<Item = &'a GraphRecord>, labels: &LabelTable) -> String {
    let mut s = String::new();
    for r in records {
        writeln!(s, "t # {}", r.id).unwrap();
        for (u, &l) in r.graph.vertex_labels().iter().enumerate() {
            writeln!(s, "v {} {}", u, labels.name(l)).unwrap();
        }
        for e in r.graph.edges() {
            writeln!(s, "e {} {} {}", e.u, e.v, labels.name(e.label)).unwrap();
        }
    }
    s
}
