//! Partition of a graph's vertices into classes of interchangeable vertices.
//!
//! Two vertices are interchangeable when they carry the same label and the same
//! labeled neighborhood. Mapping a source vertex to any member of a class costs
//! the same, so the search only ever tries the smallest unused member.

use std::collections::HashMap;

use crate::graph::{Label, LabeledGraph};

type ClassKey<'a> = (Label, &'a [(usize, Label)]);

/// Equivalence classes of a graph's vertices, numbered from 1 in order of
/// their smallest member. The dummy vertex belongs to class `lambda() + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl VertexPartition {
    pub fn new(q: &LabeledGraph) -> Self {
        let mut by_key: HashMap<ClassKey<'_>, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![0; q.vertex_count()];
        // vertices are visited in id order, so classes come out ordered by smallest member
        for (u, slot) in class_of.iter_mut().enumerate() {
            let key = (q.label(u), q.neighborhood(u));
            let idx = *by_key.entry(key).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[idx].push(u);
            *slot = idx + 1;
        }
        Self { classes, class_of }
    }

    /// Number of classes, `λ`.
    pub fn lambda(&self) -> usize {
        self.classes.len()
    }

    pub fn dummy_class(&self) -> usize {
        self.classes.len() + 1
    }

    /// Class number (1-based) of vertex `u`.
    pub fn class_of(&self, u: usize) -> usize {
        self.class_of[u]
    }

    /// Members of class `class` (1-based), ascending.
    pub fn members(&self, class: usize) -> &[usize] {
        &self.classes[class - 1]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}
