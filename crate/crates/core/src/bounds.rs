//! Lower bounds on the edit distance from label multisets and degree sequences.
//!
//! [`lb_graph`] bounds a whole pair. [`h_estimate`] bounds the cost still to be
//! paid below a search node: the bound of the unmapped remainders plus the
//! edges crossing between mapped and unmapped vertices.

use serde::Serialize;

use crate::graph::{sorted_intersection_size, Label, LabelMultiset, LabeledGraph};
use crate::mapping::{ExtVertex, MappingState};

/// The per-graph inputs of the pair bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphProfile {
    pub vertices: usize,
    pub edges: usize,
    /// Non-increasing.
    pub degrees: Vec<usize>,
    pub vertex_labels: LabelMultiset,
    pub edge_labels: LabelMultiset,
}

impl GraphProfile {
    pub fn of(g: &LabeledGraph) -> Self {
        Self {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            degrees: g.degree_sequence(),
            vertex_labels: g.vertex_label_multiset(),
            edge_labels: g.edge_label_multiset(),
        }
    }

    /// Profile of the subgraph induced by the vertices with `keep[u]`.
    pub fn induced(g: &LabeledGraph, keep: impl Fn(usize) -> bool) -> Self {
        let mut degrees = vec![0usize; g.vertex_count()];
        let mut vertex_labels = Vec::new();
        let mut edge_labels = Vec::new();
        for u in 0..g.vertex_count() {
            if keep(u) {
                vertex_labels.push(g.label(u));
            }
        }
        for e in g.edges() {
            if keep(e.u) && keep(e.v) {
                degrees[e.u] += 1;
                degrees[e.v] += 1;
                edge_labels.push(e.label);
            }
        }
        let mut degrees: Vec<usize> = (0..g.vertex_count()).filter(|&u| keep(u)).map(|u| degrees[u]).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            vertices: vertex_labels.len(),
            edges: edge_labels.len(),
            degrees,
            vertex_labels: LabelMultiset::from_labels(vertex_labels),
            edge_labels: LabelMultiset::from_labels(edge_labels),
        }
    }
}

/// `(Δ1, Δ2)`: lower bounds on the edge deletions and insertions implied by
/// the positionwise difference of the zero-padded degree sequences.
pub fn delta_from_degrees(g_degrees: &[usize], q_degrees: &[usize]) -> (u32, u32) {
    let len = g_degrees.len().max(q_degrees.len());
    let at = |s: &[usize], i: usize| s.get(i).copied().unwrap_or(0);
    let (mut surplus, mut deficit) = (0usize, 0usize);
    for i in 0..len {
        let (a, b) = (at(g_degrees, i), at(q_degrees, i));
        if a > b {
            surplus += a - b;
        } else {
            deficit += b - a;
        }
    }
    (surplus.div_ceil(2) as u32, deficit.div_ceil(2) as u32)
}

pub fn delta_bounds(g: &LabeledGraph, q: &LabeledGraph) -> (u32, u32) {
    delta_from_degrees(&g.degree_sequence(), &q.degree_sequence())
}

/// Pair lower bound from two profiles.
pub fn lb_profiles(g: &GraphProfile, q: &GraphProfile) -> u32 {
    let vertex_term = g.vertices.max(q.vertices) - g.vertex_labels.intersection_size(&q.vertex_labels);
    let (d1, d2) = delta_from_degrees(&g.degrees, &q.degrees);
    let relabel = q.edges as i64 - g.edge_labels.intersection_size(&q.edge_labels) as i64;
    let edge_term = (d1 as i64 + d2 as i64).max(d1 as i64 + relabel);
    vertex_term as u32 + edge_term as u32
}

/// Lower bound on `ged(G, Q)`.
pub fn lb_graph(g: &LabeledGraph, q: &LabeledGraph) -> u32 {
    lb_profiles(&GraphProfile::of(g), &GraphProfile::of(q))
}

/// A search node's graphs split into mapped and unmapped parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSplit {
    /// Processed source vertices, including those mapped to the dummy.
    pub g_mapped: Vec<usize>,
    pub g_unmapped: Vec<usize>,
    pub q_mapped: Vec<usize>,
    pub q_unmapped: Vec<usize>,
    /// For each processed source `u`: `(u, labels of O_u, labels of O_ψ(u))`,
    /// where `O_x` holds the edges from `x` into the unmapped part. Sorted labels.
    pub outer: Vec<(usize, Vec<Label>, Vec<Label>)>,
    /// Unmapped source vertices adjacent to a mapped one.
    pub outer_g: Vec<usize>,
    /// Unmapped target vertices adjacent to a mapped one.
    pub outer_q: Vec<usize>,
}

pub fn node_split(state: &MappingState, g: &LabeledGraph, q: &LabeledGraph) -> NodeSplit {
    let g_mapped: Vec<usize> = (0..g.vertex_count()).filter(|&u| state.source_mapped(u)).collect();
    let g_unmapped = (0..g.vertex_count()).filter(|&u| !state.source_mapped(u)).collect();
    let q_mapped: Vec<usize> = (0..q.vertex_count()).filter(|&v| state.target_mapped(v)).collect();
    let q_unmapped = (0..q.vertex_count()).filter(|&v| !state.target_mapped(v)).collect();

    let mut in_outer_g = vec![false; g.vertex_count()];
    let mut in_outer_q = vec![false; q.vertex_count()];
    let mut outer = Vec::with_capacity(g_mapped.len());
    for &u in &g_mapped {
        let mut og: Vec<Label> = Vec::new();
        for &(w, l) in g.neighborhood(u) {
            if !state.source_mapped(w) {
                og.push(l);
                in_outer_g[w] = true;
            }
        }
        let mut oq: Vec<Label> = Vec::new();
        if let Some(ExtVertex::Vertex(z)) = state.image(u) {
            for &(y, l) in q.neighborhood(z) {
                if !state.target_mapped(y) {
                    oq.push(l);
                }
            }
        }
        og.sort_unstable();
        oq.sort_unstable();
        outer.push((u, og, oq));
    }
    for &z in &q_mapped {
        for &(y, _) in q.neighborhood(z) {
            if !state.target_mapped(y) {
                in_outer_q[y] = true;
            }
        }
    }
    NodeSplit {
        g_mapped,
        g_unmapped,
        q_mapped,
        q_unmapped,
        outer,
        outer_g: (0..g.vertex_count()).filter(|&u| in_outer_g[u]).collect(),
        outer_q: (0..q.vertex_count()).filter(|&v| in_outer_q[v]).collect(),
    }
}

/// The three bounds combined into the heuristic, with their shared base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeuristicParts {
    /// Bound of the unmapped remainders alone.
    pub rest: u32,
    pub lb1: u32,
    pub lb2: u32,
    pub lb3: u32,
    pub h: u32,
}

pub fn h_breakdown(state: &MappingState, g: &LabeledGraph, q: &LabeledGraph) -> HeuristicParts {
    let split = node_split(state, g, q);
    let rest = lb_profiles(
        &GraphProfile::induced(g, |u| !state.source_mapped(u)),
        &GraphProfile::induced(q, |v| !state.target_mapped(v)),
    );
    let (mut both, mut q_side, mut g_side) = (0u32, 0u32, 0u32);
    for (_, og, oq) in &split.outer {
        let common = sorted_intersection_size(og, oq);
        both += (og.len().max(oq.len()) - common) as u32;
        q_side += (oq.len() - common) as u32;
        g_side += (og.len() - common) as u32;
    }
    let (ag, aq) = (split.outer_g.len(), split.outer_q.len());
    let lb1 = rest + both;
    let lb2 = rest + q_side + ag.saturating_sub(aq) as u32;
    let lb3 = rest + g_side + aq.saturating_sub(ag) as u32;
    HeuristicParts { rest, lb1, lb2, lb3, h: lb1.max(lb2).max(lb3) }
}

/// `h(r) = max(LB1, LB2, LB3)` for the node whose mapping is `state`.
pub fn h_estimate(state: &MappingState, g: &LabeledGraph, q: &LabeledGraph) -> u32 {
    h_breakdown(state, g, q).h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mapping::{ExtVertex::Vertex, GraphMapping};

    #[test]
    fn deltas() {
        let (_, g, q) = fixtures::cycle_star();
        assert_eq!(delta_bounds(&g, &g), (0, 0));
        // [2,2,2,2] vs [3,1,1,1]: surplus 3, deficit 1
        assert_eq!(delta_bounds(&g, &q), (2, 1));
        let l = Label(0);
        let edge = LabeledGraph::new(vec![l, l], &[(0, 1, l)]).unwrap();
        let pair = LabeledGraph::new(vec![l, l], &[]).unwrap();
        assert_eq!(delta_bounds(&edge, &pair), (1, 0));
        // padding: the longer side's extra degrees count fully
        assert_eq!(delta_from_degrees(&[1, 1], &[]), (1, 0));
        assert_eq!(delta_from_degrees(&[], &[2, 1, 1]), (0, 2));
    }

    #[test]
    fn lb_of_identical_graphs_is_zero() {
        let (_, g, q) = fixtures::five_six();
        assert_eq!(lb_graph(&g, &g), 0);
        assert_eq!(lb_graph(&q, &q), 0);
        assert_eq!(lb_graph(&LabeledGraph::empty(), &LabeledGraph::empty()), 0);
    }

    #[test]
    fn lb_against_empty_is_everything() {
        let (_, g, _) = fixtures::five_six();
        assert_eq!(lb_graph(&LabeledGraph::empty(), &g), 10);
        assert_eq!(lb_graph(&g, &LabeledGraph::empty()), 10);
    }

    fn two_vertex_node() -> (LabeledGraph, LabeledGraph, MappingState) {
        let (_, g, q) = fixtures::five_six();
        let m = GraphMapping::from_pairs(5, 6, [(Vertex(0), Vertex(0)), (Vertex(1), Vertex(1))]);
        let s = MappingState::of(&m);
        (g, q, s)
    }

    #[test]
    fn split_of_two_vertex_prefix() {
        let (g, q, s) = two_vertex_node();
        let split = node_split(&s, &g, &q);
        assert_eq!(split.g_unmapped, vec![2, 3, 4]);
        assert_eq!(split.q_unmapped, vec![2, 3, 4, 5]);
        let a = g.edge_label(0, 2).unwrap();
        let b = g.edge_label(1, 3).unwrap();
        assert_eq!(split.outer[0], (0, vec![a, a], vec![a, a]));
        assert_eq!(split.outer[1], (1, vec![b], vec![b]));
        assert_eq!(split.outer_g, vec![2, 3]);
        assert_eq!(split.outer_q, vec![2, 3, 4]);
    }

    #[test]
    fn heuristic_on_two_vertex_prefix() {
        let (g, q, s) = two_vertex_node();
        assert_eq!(h_breakdown(&s, &g, &q), HeuristicParts { rest: 2, lb1: 2, lb2: 2, lb3: 3, h: 3 });
    }

    #[test]
    fn root_and_leaf() {
        let (_, g, q) = fixtures::five_six();
        let root = MappingState::new(5, 6);
        assert_eq!(h_estimate(&root, &g, &q), lb_graph(&g, &q));
        let split = node_split(&root, &g, &q);
        assert_eq!(split.g_unmapped.len(), 5);
        assert!(split.outer.is_empty() && split.outer_g.is_empty());

        let leaf = MappingState::of(&GraphMapping::from_targets(
            5,
            6,
            &[Vertex(0), Vertex(1), Vertex(2), Vertex(3), Vertex(5)],
        ));
        assert_eq!(h_estimate(&leaf, &g, &q), 0);
        let split = node_split(&leaf, &g, &q);
        assert!(split.g_unmapped.is_empty() && split.q_unmapped.is_empty());
        assert!(split.outer.iter().all(|(_, og, oq)| og.is_empty() && oq.is_empty()));
    }

    #[test]
    fn renumbering_invariance() {
        let (_, g, q) = fixtures::five_six();
        let perm = [4, 2, 0, 1, 3];
        let g2 = g.permuted(&perm);
        assert_eq!(delta_bounds(&g, &q), delta_bounds(&g2, &q));
        assert_eq!(lb_graph(&g, &q), lb_graph(&g2, &q));
    }
}
