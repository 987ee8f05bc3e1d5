//! Labeled undirected graphs, label interning and label multisets.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Interned vertex or edge label.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

/// Label carried by dummy vertices. No parsed token ever interns to it.
pub const DUMMY_LABEL: Label = Label(u32::MAX);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == DUMMY_LABEL {
            f.write_str("ε")
        } else {
            write!(f, "#{}", self.0)
        }
    }
}

/// Session-wide string interner shared by vertex and edge labels.
#[derive(Clone, Debug, Default)]
pub struct LabelTable {
    ids: HashMap<String, Label>,
    names: Vec<String>,
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, token: &str) -> Label {
        if let Some(&label) = self.ids.get(token) {
            return label;
        }
        let label = Label(self.names.len() as u32);
        assert!(label != DUMMY_LABEL, "label table exhausted");
        self.names.push(token.to_owned());
        self.ids.insert(token.to_owned(), label);
        label
    }

    pub fn get(&self, token: &str) -> Option<Label> {
        self.ids.get(token).copied()
    }

    /// Token for `label`; the dummy label resolves to `"ε"`.
    pub fn name(&self, label: Label) -> &str {
        if label == DUMMY_LABEL {
            return "ε";
        }
        &self.names[label.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// An undirected edge stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: Label,
}

/// Immutable simple undirected graph with labeled vertices and edges.
///
/// Vertex ids are dense, `0..vertex_count()`. Edge lookup is backed by a dense
/// adjacency matrix, which suits the small graphs exact GED is feasible on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabeledGraph {
    vertex_labels: Vec<Label>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, Label)>>,
    matrix: Vec<Option<Label>>,
}

impl LabeledGraph {
    /// Builds a graph, rejecting self-loops, duplicate edges and unknown endpoints.
    pub fn new(vertex_labels: Vec<Label>, edges: &[(usize, usize, Label)]) -> Result<Self, GraphError> {
        let n = vertex_labels.len();
        let mut matrix = vec![None; n * n];
        let mut adjacency = vec![Vec::new(); n];
        let mut stored = Vec::with_capacity(edges.len());
        for &(a, b, label) in edges {
            if a >= n || b >= n {
                return Err(GraphError::UnknownVertex(a.max(b)));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if matrix[a * n + b].is_some() {
                return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
            }
            matrix[a * n + b] = Some(label);
            matrix[b * n + a] = Some(label);
            adjacency[a].push((b, label));
            adjacency[b].push((a, label));
            stored.push(Edge { u: a.min(b), v: a.max(b), label });
        }
        stored.sort();
        for list in &mut adjacency {
            list.sort();
        }
        Ok(Self { vertex_labels, edges: stored, adjacency, matrix })
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), &[]).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_labels.is_empty()
    }

    pub fn label(&self, u: usize) -> Label {
        self.vertex_labels[u]
    }

    pub fn vertex_labels(&self) -> &[Label] {
        &self.vertex_labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Label of edge `(u, v)`, if present.
    #[inline]
    pub fn edge_label(&self, u: usize, v: usize) -> Option<Label> {
        self.matrix[u * self.vertex_labels.len() + v]
    }

    /// Adjacent `(neighbor, edge label)` pairs, sorted by neighbor id.
    ///
    /// Panics if `u` is out of range.
    pub fn neighborhood(&self, u: usize) -> &[(usize, Label)] {
        assert!(u < self.vertex_count(), "vertex {u} out of range");
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    /// Vertex degrees sorted non-increasing.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degrees: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        degrees
    }

    pub fn vertex_label_multiset(&self) -> LabelMultiset {
        LabelMultiset::from_labels(self.vertex_labels.iter().copied())
    }

    pub fn edge_label_multiset(&self) -> LabelMultiset {
        LabelMultiset::from_labels(self.edges.iter().map(|e| e.label))
    }

    /// Label multiset of the vertices (`Vertices`) or edges (`Edges`).
    pub fn label_multiset(&self, which: LabelSource) -> LabelMultiset {
        match which {
            LabelSource::Vertices => self.vertex_label_multiset(),
            LabelSource::Edges => self.edge_label_multiset(),
        }
    }

    /// Copy with vertex ids permuted: old vertex `u` becomes `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.vertex_count());
        let mut labels = vec![DUMMY_LABEL; perm.len()];
        for (u, &p) in perm.iter().enumerate() {
            labels[p] = self.vertex_labels[u];
        }
        let edges: Vec<_> = self.edges.iter().map(|e| (perm[e.u], perm[e.v], e.label)).collect();
        Self::new(labels, &edges).expect("permutation preserves simplicity")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LabelSource {
    Vertices,
    Edges,
}

/// Multiset of labels, kept as a sorted vector.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LabelMultiset {
    sorted: Vec<Label>,
}

impl LabelMultiset {
    pub fn from_labels(labels: impl IntoIterator<Item = Label>) -> Self {
        let mut sorted: Vec<Label> = labels.into_iter().collect();
        sorted.sort_unstable();
        Self { sorted }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        let lo = self.sorted.partition_point(|&l| l < label);
        let hi = self.sorted.partition_point(|&l| l <= label);
        hi - lo
    }

    /// `(label, count)` pairs in label order.
    pub fn counts(&self) -> Vec<(Label, usize)> {
        let mut out: Vec<(Label, usize)> = Vec::new();
        for &l in &self.sorted {
            match out.last_mut() {
                Some((last, c)) if *last == l => *c += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// `|A ∩ B| = Σ min(count_A, count_B)`.
    pub fn intersection_size(&self, other: &Self) -> usize {
        sorted_intersection_size(&self.sorted, &other.sorted)
    }
}

/// Multiset intersection size of two sorted label slices.
pub(crate) fn sorted_intersection_size(a: &[Label], b: &[Label]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    common
}
