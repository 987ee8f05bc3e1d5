//! Vertex mappings between two graphs and the edit paths they induce.
//!
//! A mapping pairs vertices of the dummy-extended vertex sets of `G` and `Q`.
//! `(u -> Dummy)` deletes `u`, `(Dummy -> v)` inserts `v`, and a real pair
//! keeps the vertex, substituting its label if needed. Edges follow: an edge of
//! `G` survives iff its image is an edge of `Q`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::graph::{Label, LabelTable, LabeledGraph};
use crate::partition::VertexPartition;

/// A vertex of the dummy-extended vertex set. Real vertices sort before the dummy.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExtVertex {
    Vertex(usize),
    Dummy,
}

impl ExtVertex {
    pub fn real(self) -> Option<usize> {
        match self {
            ExtVertex::Vertex(v) => Some(v),
            ExtVertex::Dummy => None,
        }
    }

    pub fn is_dummy(self) -> bool {
        self == ExtVertex::Dummy
    }
}

impl fmt::Display for ExtVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtVertex::Vertex(v) => write!(f, "{v}"),
            ExtVertex::Dummy => f.write_str("ε"),
        }
    }
}

/// A partial or complete mapping, stored as ordered `(source, target)` pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GraphMapping {
    pairs: Vec<(ExtVertex, ExtVertex)>,
    source_size: usize,
    target_size: usize,
}

impl GraphMapping {
    pub fn new(source_size: usize, target_size: usize) -> Self {
        Self { pairs: Vec::new(), source_size, target_size }
    }

    /// Builds a mapping from pairs; panics when a vertex repeats, a pair is
    /// `(Dummy, Dummy)` or an id is out of range.
    pub fn from_pairs(
        source_size: usize,
        target_size: usize,
        pairs: impl IntoIterator<Item = (ExtVertex, ExtVertex)>,
    ) -> Self {
        let mut m = Self::new(source_size, target_size);
        for (s, t) in pairs {
            m.push(s, t);
        }
        m
    }

    /// Real-to-real mapping `source u -> target targets[u]`.
    pub fn from_targets(source_size: usize, target_size: usize, targets: &[ExtVertex]) -> Self {
        assert_eq!(targets.len(), source_size);
        let mut m = Self::from_pairs(
            source_size,
            target_size,
            targets.iter().enumerate().map(|(u, &t)| (ExtVertex::Vertex(u), t)),
        );
        m.complete_with_insertions();
        m
    }

    pub fn push(&mut self, source: ExtVertex, target: ExtVertex) {
        assert!(!(source.is_dummy() && target.is_dummy()), "(dummy, dummy) pair");
        if let Some(s) = source.real() {
            assert!(s < self.source_size, "source {s} out of range");
            assert!(self.pairs.iter().all(|&(x, _)| x != source), "source {s} mapped twice");
        }
        if let Some(t) = target.real() {
            assert!(t < self.target_size, "target {t} out of range");
            assert!(self.pairs.iter().all(|&(_, y)| y != target), "target {t} mapped twice");
        }
        self.pairs.push((source, target));
    }

    /// Appends `(Dummy -> v)` for every target not yet covered, ascending.
    pub fn complete_with_insertions(&mut self) {
        let mut used = vec![false; self.target_size];
        for &(_, t) in &self.pairs {
            if let Some(t) = t.real() {
                used[t] = true;
            }
        }
        for (v, _) in used.iter().enumerate().filter(|(_, &u)| !u) {
            self.pairs.push((ExtVertex::Dummy, ExtVertex::Vertex(v)));
        }
    }

    pub fn pairs(&self) -> &[(ExtVertex, ExtVertex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    /// Number of real source vertices already mapped.
    pub fn mapped_sources(&self) -> usize {
        self.pairs.iter().filter(|(s, _)| !s.is_dummy()).count()
    }

    /// True when every real vertex on both sides is covered.
    pub fn is_complete(&self) -> bool {
        let sources = self.mapped_sources();
        let targets = self.pairs.iter().filter(|(_, t)| !t.is_dummy()).count();
        sources == self.source_size && targets == self.target_size
    }

    /// Image of source vertex `u`, if mapped.
    pub fn target_of(&self, u: usize) -> Option<ExtVertex> {
        self.pairs.iter().find(|(s, _)| *s == ExtVertex::Vertex(u)).map(|&(_, t)| t)
    }

    /// Target ids in pair order.
    pub fn targets(&self) -> impl Iterator<Item = ExtVertex> + '_ {
        self.pairs.iter().map(|&(_, t)| t)
    }
}

impl fmt::Display for GraphMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, t)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}->{t}")?;
        }
        f.write_str("}")
    }
}

/// Dense view of a mapping: image of every source and preimage of every target.
#[derive(Clone, Debug)]
pub struct MappingState {
    source_image: Vec<Option<ExtVertex>>,
    target_preimage: Vec<Option<ExtVertex>>,
}

impl MappingState {
    pub fn new(source_size: usize, target_size: usize) -> Self {
        Self { source_image: vec![None; source_size], target_preimage: vec![None; target_size] }
    }

    pub fn of(mapping: &GraphMapping) -> Self {
        let mut s = Self::new(mapping.source_size, mapping.target_size);
        for &(a, b) in mapping.pairs() {
            s.assign(a, b);
        }
        s
    }

    pub fn assign(&mut self, source: ExtVertex, target: ExtVertex) {
        if let Some(u) = source.real() {
            self.source_image[u] = Some(target);
        }
        if let Some(v) = target.real() {
            self.target_preimage[v] = Some(source);
        }
    }

    #[inline]
    pub fn image(&self, u: usize) -> Option<ExtVertex> {
        self.source_image[u]
    }

    #[inline]
    pub fn preimage(&self, v: usize) -> Option<ExtVertex> {
        self.target_preimage[v]
    }

    #[inline]
    pub fn source_mapped(&self, u: usize) -> bool {
        self.source_image[u].is_some()
    }

    #[inline]
    pub fn target_mapped(&self, v: usize) -> bool {
        self.target_preimage[v].is_some()
    }

    pub fn unmapped_sources(&self) -> usize {
        self.source_image.iter().filter(|x| x.is_none()).count()
    }

    pub fn unmapped_targets(&self) -> usize {
        self.target_preimage.iter().filter(|x| x.is_none()).count()
    }

    /// Cost added by extending the mapping with `(u -> z)`: the vertex
    /// operation plus every edge between `u` and an already mapped source
    /// whose fate is now decided.
    pub fn extension_cost(&self, g: &LabeledGraph, q: &LabeledGraph, u: usize, z: ExtVertex) -> u32 {
        debug_assert!(!self.source_mapped(u));
        match z {
            ExtVertex::Dummy => {
                let deleted_edges = g.neighborhood(u).iter().filter(|&&(w, _)| self.source_mapped(w)).count();
                1 + deleted_edges as u32
            }
            ExtVertex::Vertex(z) => {
                let mut cost = u32::from(g.label(u) != q.label(z));
                for &(w, label) in g.neighborhood(u) {
                    match self.source_image[w] {
                        None => {}
                        Some(ExtVertex::Dummy) => cost += 1,
                        Some(ExtVertex::Vertex(y)) => match q.edge_label(z, y) {
                            Some(other) => cost += u32::from(other != label),
                            None => cost += 1,
                        },
                    }
                }
                // Q edges from z to images of mapped sources that have no counterpart in G
                for &(y, _) in q.neighborhood(z) {
                    if let Some(ExtVertex::Vertex(w)) = self.target_preimage[y] {
                        if g.edge_label(u, w).is_none() {
                            cost += 1;
                        }
                    }
                }
                cost
            }
        }
    }

    /// Cost of inserting every unmapped target vertex together with all target
    /// edges touching one.
    pub fn insertion_cost(&self, q: &LabeledGraph) -> u32 {
        let vertices = self.unmapped_targets();
        let edges = q.edges().iter().filter(|e| !self.target_mapped(e.u) || !self.target_mapped(e.v)).count();
        (vertices + edges) as u32
    }
}

/// The unlabeled common structure `H` induced by a complete mapping, as ids in `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedStructure {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

pub fn induced_structure(mapping: &GraphMapping, g: &LabeledGraph, q: &LabeledGraph) -> InducedStructure {
    let state = MappingState::of(mapping);
    let real_image = |u: usize| state.image(u).and_then(ExtVertex::real);
    let vertices = (0..g.vertex_count()).filter(|&u| real_image(u).is_some()).collect();
    let edges = g
        .edges()
        .iter()
        .filter(|e| match (real_image(e.u), real_image(e.v)) {
            (Some(a), Some(b)) => q.edge_label(a, b).is_some(),
            _ => false,
        })
        .map(|e| (e.u, e.v))
        .collect();
    InducedStructure { vertices, edges }
}

/// Deletion, insertion and substitution costs of the edit path induced by a mapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EditCostBreakdown {
    pub c_d: u32,
    pub c_i: u32,
    pub c_s: u32,
    pub total: u32,
}

/// Cost of the edit path `G -> G^ψ -> Q^ψ -> Q` of a complete mapping.
pub fn edit_cost(mapping: &GraphMapping, g: &LabeledGraph, q: &LabeledGraph) -> EditCostBreakdown {
    assert!(mapping.is_complete(), "edit_cost needs a complete mapping");
    let h = induced_structure(mapping, g, q);
    let state = MappingState::of(mapping);
    let image = |u: usize| state.image(u).and_then(ExtVertex::real).unwrap();
    let c_d = (g.vertex_count() - h.vertices.len() + g.edge_count() - h.edges.len()) as u32;
    let c_i = (q.vertex_count() - h.vertices.len() + q.edge_count() - h.edges.len()) as u32;
    let vertex_subs = h.vertices.iter().filter(|&&u| g.label(u) != q.label(image(u))).count();
    let edge_subs = h.edges.iter().filter(|&&(u, v)| g.edge_label(u, v) != q.edge_label(image(u), image(v))).count();
    let c_s = (vertex_subs + edge_subs) as u32;
    EditCostBreakdown { c_d, c_i, c_s, total: c_d + c_i + c_s }
}

/// Per-pair class numbers of the targets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalCode(pub Vec<usize>);

pub fn canonical_code(mapping: &GraphMapping, partition: &VertexPartition) -> CanonicalCode {
    CanonicalCode(
        mapping
            .targets()
            .map(|t| match t {
                ExtVertex::Vertex(v) => partition.class_of(v),
                ExtVertex::Dummy => partition.dummy_class(),
            })
            .collect(),
    )
}

/// Orders two mappings sharing a canonical code by their targets at the
/// first position where they differ. Panics when the codes differ.
pub fn code_compare(a: &GraphMapping, b: &GraphMapping, partition: &VertexPartition) -> Ordering {
    assert_eq!(
        canonical_code(a, partition),
        canonical_code(b, partition),
        "code_compare requires equal canonical codes"
    );
    a.targets().cmp(b.targets())
}

/// One edit operation. Vertex ids refer to the graph being edited; inserted
/// vertices receive fresh ids starting at `|V_G|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditOp {
    DelEdge { u: usize, v: usize },
    DelVertex { vertex: usize },
    SubVertex { vertex: usize, label: Label },
    SubEdge { u: usize, v: usize, label: Label },
    InsVertex { vertex: usize, label: Label },
    InsEdge { u: usize, v: usize, label: Label },
}

impl EditOp {
    /// JSON object with label tokens resolved through `labels`.
    pub fn to_json(&self, labels: &LabelTable) -> serde_json::Value {
        match *self {
            EditOp::DelEdge { u, v } => json!({"op": "del_edge", "u": u, "v": v}),
            EditOp::DelVertex { vertex } => json!({"op": "del_vertex", "vertex": vertex}),
            EditOp::SubVertex { vertex, label } => {
                json!({"op": "sub_vertex", "vertex": vertex, "label": labels.name(label)})
            }
            EditOp::SubEdge { u, v, label } => {
                json!({"op": "sub_edge", "u": u, "v": v, "label": labels.name(label)})
            }
            EditOp::InsVertex { vertex, label } => {
                json!({"op": "ins_vertex", "vertex": vertex, "label": labels.name(label)})
            }
            EditOp::InsEdge { u, v, label } => {
                json!({"op": "ins_edge", "u": u, "v": v, "label": labels.name(label)})
            }
        }
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::DelEdge { u, v } => write!(f, "del_edge({u},{v})"),
            EditOp::DelVertex { vertex } => write!(f, "del_vertex({vertex})"),
            EditOp::SubVertex { vertex, label } => write!(f, "sub_vertex({vertex},{label})"),
            EditOp::SubEdge { u, v, label } => write!(f, "sub_edge({u},{v},{label})"),
            EditOp::InsVertex { vertex, label } => write!(f, "ins_vertex({vertex},{label})"),
            EditOp::InsEdge { u, v, label } => write!(f, "ins_edge({u},{v},{label})"),
        }
    }
}

/// Concrete operations of the edit path induced by a complete mapping.
///
/// Edge deletions precede vertex deletions so that only isolated vertices are
/// ever deleted; insertions come last.
pub fn realize_edit_path(mapping: &GraphMapping, g: &LabeledGraph, q: &LabeledGraph) -> Vec<EditOp> {
    assert!(mapping.is_complete(), "realize_edit_path needs a complete mapping");
    let state = MappingState::of(mapping);
    let image = |u: usize| state.image(u).and_then(ExtVertex::real);
    let mut ops = Vec::new();

    for e in g.edges() {
        let kept = matches!((image(e.u), image(e.v)), (Some(a), Some(b)) if q.edge_label(a, b).is_some());
        if !kept {
            ops.push(EditOp::DelEdge { u: e.u, v: e.v });
        }
    }
    for u in 0..g.vertex_count() {
        if image(u).is_none() {
            ops.push(EditOp::DelVertex { vertex: u });
        }
    }
    for u in 0..g.vertex_count() {
        if let Some(z) = image(u) {
            if g.label(u) != q.label(z) {
                ops.push(EditOp::SubVertex { vertex: u, label: q.label(z) });
            }
        }
    }
    for e in g.edges() {
        if let (Some(a), Some(b)) = (image(e.u), image(e.v)) {
            if let Some(label) = q.edge_label(a, b) {
                if label != e.label {
                    ops.push(EditOp::SubEdge { u: e.u, v: e.v, label });
                }
            }
        }
    }

    // working id of every target vertex: its preimage, or a fresh id if inserted
    let mut working = vec![usize::MAX; q.vertex_count()];
    let mut next = g.vertex_count();
    for (v, slot) in working.iter_mut().enumerate() {
        match state.preimage(v) {
            Some(ExtVertex::Vertex(u)) => *slot = u,
            _ => {
                *slot = next;
                ops.push(EditOp::InsVertex { vertex: next, label: q.label(v) });
                next += 1;
            }
        }
    }
    for e in q.edges() {
        let existed = match (state.preimage(e.u), state.preimage(e.v)) {
            (Some(ExtVertex::Vertex(a)), Some(ExtVertex::Vertex(b))) => g.edge_label(a, b).is_some(),
            _ => false,
        };
        if !existed {
            ops.push(EditOp::InsEdge { u: working[e.u], v: working[e.v], label: e.label });
        }
    }
    ops
}
