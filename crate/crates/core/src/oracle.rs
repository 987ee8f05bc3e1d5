//! Brute-force ground truth for small graphs.
//!
//! Nothing here uses the reduced generator, the heuristics or the incremental
//! costs: the distance is the minimum batch edit cost over every mapping the
//! unrestricted generator can produce.

use std::collections::BTreeMap;

use crate::error::{EditPathError, OracleError};
use crate::graph::{Label, LabeledGraph};
use crate::mapping::{edit_cost, EditOp, ExtVertex, GraphMapping};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_mappings: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self { max_vertices: 8, max_mappings: 10_000_000 }
    }
}

impl OracleLimits {
    fn check_vertices(&self, graphs: &[&LabeledGraph]) -> Result<(), OracleError> {
        for g in graphs {
            if g.vertex_count() > self.max_vertices {
                return Err(OracleError::TooManyVertices { vertices: g.vertex_count(), limit: self.max_vertices });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub distance: u32,
    /// A complete mapping attaining `distance`; the first one found in
    /// generation order.
    pub mapping: GraphMapping,
    pub mappings_enumerated: u64,
}

/// Number of complete mappings the unrestricted generator produces:
/// `Σ_k C(n, k) C(m, k) k!` over the number `k` of real pairs.
pub fn basic_mapping_count(n: usize, m: usize) -> u128 {
    let mut total = 0u128;
    for k in 0..=n.min(m) {
        let mut term = 1u128;
        for i in 0..k {
            // C(n,k) C(m,k) k! = n!/(n-k)! * m!/(m-k)! / k!
            term = term * (n - i) as u128 * (m - i) as u128 / (i + 1) as u128;
        }
        total += term;
    }
    total
}

pub fn exhaustive_ged(g: &LabeledGraph, q: &LabeledGraph) -> Result<OracleResult, OracleError> {
    exhaustive_ged_with(g, q, OracleLimits::default())
}

pub fn exhaustive_ged_with(
    g: &LabeledGraph,
    q: &LabeledGraph,
    limits: OracleLimits,
) -> Result<OracleResult, OracleError> {
    limits.check_vertices(&[g, q])?;
    if basic_mapping_count(g.vertex_count(), q.vertex_count()) > limits.max_mappings as u128 {
        return Err(OracleError::TooManyMappings { limit: limits.max_mappings });
    }
    let mut search = Exhaustive {
        g,
        q,
        used: vec![false; q.vertex_count()],
        mapping: GraphMapping::new(g.vertex_count(), q.vertex_count()),
        best: None,
        enumerated: 0,
    };
    search.descend(0);
    let (distance, mapping) = search.best.expect("at least one complete mapping exists");
    Ok(OracleResult { distance, mapping, mappings_enumerated: search.enumerated })
}

struct Exhaustive<'a> {
    g: &'a LabeledGraph,
    q: &'a LabeledGraph,
    used: Vec<bool>,
    mapping: GraphMapping,
    best: Option<(u32, GraphMapping)>,
    enumerated: u64,
}

impl Exhaustive<'_> {
    fn descend(&mut self, u: usize) {
        if u == self.g.vertex_count() {
            let mut leaf = self.mapping.clone();
            leaf.complete_with_insertions();
            let cost = edit_cost(&leaf, self.g, self.q).total;
            self.enumerated += 1;
            if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                self.best = Some((cost, leaf));
            }
            return;
        }
        for v in 0..self.q.vertex_count() {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.mapping.push(ExtVertex::Vertex(u), ExtVertex::Vertex(v));
            self.descend(u + 1);
            self.pop();
            self.used[v] = false;
        }
        self.mapping.push(ExtVertex::Vertex(u), ExtVertex::Dummy);
        self.descend(u + 1);
        self.pop();
    }

    fn pop(&mut self) {
        let pairs: Vec<_> = self.mapping.pairs()[..self.mapping.len() - 1].to_vec();
        self.mapping = GraphMapping::from_pairs(self.g.vertex_count(), self.q.vertex_count(), pairs);
    }
}

/// Label-preserving isomorphism test by backtracking.
pub fn is_isomorphic(g: &LabeledGraph, q: &LabeledGraph) -> Result<bool, OracleError> {
    OracleLimits::default().check_vertices(&[g, q])?;
    Ok(isomorphic_unchecked(g, q))
}

fn isomorphic_unchecked(g: &LabeledGraph, q: &LabeledGraph) -> bool {
    if g.vertex_count() != q.vertex_count()
        || g.edge_count() != q.edge_count()
        || g.vertex_label_multiset() != q.vertex_label_multiset()
        || g.edge_label_multiset() != q.edge_label_multiset()
        || g.degree_sequence() != q.degree_sequence()
    {
        return false;
    }
    let mut image = vec![usize::MAX; g.vertex_count()];
    let mut used = vec![false; q.vertex_count()];
    extend_isomorphism(g, q, 0, &mut image, &mut used)
}

fn extend_isomorphism(g: &LabeledGraph, q: &LabeledGraph, u: usize, image: &mut [usize], used: &mut [bool]) -> bool {
    if u == g.vertex_count() {
        return true;
    }
    for v in 0..q.vertex_count() {
        if used[v] || g.label(u) != q.label(v) || g.degree(u) != q.degree(v) {
            continue;
        }
        let consistent = (0..u).all(|w| g.edge_label(u, w) == q.edge_label(v, image[w]));
        if !consistent {
            continue;
        }
        image[u] = v;
        used[v] = true;
        if extend_isomorphism(g, q, u + 1, image, used) {
            return true;
        }
        used[v] = false;
    }
    false
}

/// Applies `ops` to `g`, rejecting any operation that does not fit the graph
/// it is applied to. Only isolated vertices may be deleted.
pub fn apply_edit_path(g: &LabeledGraph, ops: &[EditOp]) -> Result<LabeledGraph, EditPathError> {
    let mut labels: Vec<Option<Label>> = g.vertex_labels().iter().copied().map(Some).collect();
    let mut edges: BTreeMap<(usize, usize), Label> = g.edges().iter().map(|e| ((e.u, e.v), e.label)).collect();
    let key = |u: usize, v: usize| (u.min(v), u.max(v));

    for (index, op) in ops.iter().enumerate() {
        let fail = |reason: &str| EditPathError { index, op: op.to_string(), reason: reason.to_owned() };
        let exists = |labels: &[Option<Label>], v: usize| labels.get(v).is_some_and(Option::is_some);
        match *op {
            EditOp::DelEdge { u, v } => {
                edges.remove(&key(u, v)).ok_or_else(|| fail("no such edge"))?;
            }
            EditOp::DelVertex { vertex } => {
                if !exists(&labels, vertex) {
                    return Err(fail("no such vertex"));
                }
                if edges.keys().any(|&(a, b)| a == vertex || b == vertex) {
                    return Err(fail("vertex is not isolated"));
                }
                labels[vertex] = None;
            }
            EditOp::SubVertex { vertex, label } => {
                if !exists(&labels, vertex) {
                    return Err(fail("no such vertex"));
                }
                labels[vertex] = Some(label);
            }
            EditOp::SubEdge { u, v, label } => {
                let slot = edges.get_mut(&key(u, v)).ok_or_else(|| fail("no such edge"))?;
                *slot = label;
            }
            EditOp::InsVertex { vertex, label } => {
                if exists(&labels, vertex) {
                    return Err(fail("vertex id already in use"));
                }
                if labels.len() <= vertex {
                    labels.resize(vertex + 1, None);
                }
                labels[vertex] = Some(label);
            }
            EditOp::InsEdge { u, v, label } => {
                if u == v {
                    return Err(fail("self-loop"));
                }
                if !exists(&labels, u) || !exists(&labels, v) {
                    return Err(fail("endpoint does not exist"));
                }
                if edges.insert(key(u, v), label).is_some() {
                    return Err(fail("edge already exists"));
                }
            }
        }
    }

    let mut compact = vec![usize::MAX; labels.len()];
    let mut kept = Vec::new();
    for (v, l) in labels.iter().enumerate() {
        if let Some(l) = l {
            compact[v] = kept.len();
            kept.push(*l);
        }
    }
    let edge_list: Vec<_> = edges.iter().map(|(&(u, v), &l)| (compact[u], compact[v], l)).collect();
    Ok(LabeledGraph::new(kept, &edge_list).expect("edits keep the graph simple"))
}

/// True iff applying `ops` to `g` yields a graph isomorphic to `q`.
pub fn check_edit_path(g: &LabeledGraph, q: &LabeledGraph, ops: &[EditOp]) -> Result<bool, EditPathError> {
    let edited = apply_edit_path(g, ops)?;
    Ok(isomorphic_unchecked(&edited, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mapping::realize_edit_path;

    #[test]
    fn cycle_star_distance() {
        let (_, g, q) = fixtures::cycle_star();
        let r = exhaustive_ged(&g, &q).unwrap();
        assert_eq!(r.distance, 4);
        assert_eq!(r.mappings_enumerated, basic_mapping_count(4, 4) as u64);
        assert_eq!(edit_cost(&r.mapping, &g, &q).total, 4);
    }

    #[test]
    fn self_distance_zero() {
        let (_, g, q) = fixtures::five_six();
        assert_eq!(exhaustive_ged(&g, &g).unwrap().distance, 0);
        assert_eq!(exhaustive_ged(&q, &q).unwrap().distance, 0);
    }

    #[test]
    fn empty_source() {
        let (_, _, q) = fixtures::five_six();
        let r = exhaustive_ged(&LabeledGraph::empty(), &q).unwrap();
        assert_eq!(r.distance, (q.vertex_count() + q.edge_count()) as u32);
        assert_eq!(r.mappings_enumerated, 1);
    }

    #[test]
    fn mapping_counts() {
        // n = m = 1: {u->v, u->ε}
        assert_eq!(basic_mapping_count(1, 1), 2);
        assert_eq!(basic_mapping_count(2, 2), 7);
        assert_eq!(basic_mapping_count(0, 5), 1);
        assert_eq!(basic_mapping_count(7, 7), 130_922);
    }

    #[test]
    fn refuses_oversized_inputs() {
        let big = LabeledGraph::new(vec![Label(0); 9], &[]).unwrap();
        assert_eq!(exhaustive_ged(&big, &big).unwrap_err(), OracleError::TooManyVertices { vertices: 9, limit: 8 });
        let small = LabeledGraph::new(vec![Label(0); 6], &[]).unwrap();
        let tight = OracleLimits { max_vertices: 8, max_mappings: 100 };
        assert_eq!(
            exhaustive_ged_with(&small, &small, tight).unwrap_err(),
            OracleError::TooManyMappings { limit: 100 }
        );
        assert!(is_isomorphic(&big, &big).is_err());
    }

    #[test]
    fn isomorphism() {
        let (_, g, q) = fixtures::cycle_star();
        assert!(is_isomorphic(&g, &g).unwrap());
        assert!(!is_isomorphic(&g, &q).unwrap());
        let shuffled = q.permuted(&[2, 0, 3, 1]);
        assert!(is_isomorphic(&q, &shuffled).unwrap());
        // same shape, one edge label moved
        let l = |t: u32| Label(t);
        let a = LabeledGraph::new(vec![l(0); 3], &[(0, 1, l(1)), (1, 2, l(2))]).unwrap();
        let b = LabeledGraph::new(vec![l(0); 3], &[(0, 1, l(1)), (0, 2, l(2))]).unwrap();
        assert!(is_isomorphic(&a, &b).unwrap());
        let c = LabeledGraph::new(vec![l(0), l(3), l(0)], &[(0, 1, l(1)), (1, 2, l(2))]).unwrap();
        assert!(!is_isomorphic(&a, &c).unwrap());
    }

    #[test]
    fn worked_edit_path_is_accepted() {
        let (_, g, q) = fixtures::cycle_star();
        let psi = GraphMapping::from_targets(4, 4, &(0..4).map(ExtVertex::Vertex).collect::<Vec<_>>());
        let ops = realize_edit_path(&psi, &g, &q);
        assert_eq!(ops.len(), 4);
        assert!(check_edit_path(&g, &q, &ops).unwrap());
        assert!(check_edit_path(&g, &g, &[]).unwrap());
        assert!(!check_edit_path(&g, &q, &[]).unwrap());
    }

    #[test]
    fn inapplicable_operations() {
        let (_, g, _) = fixtures::cycle_star();
        let e = check_edit_path(&g, &g, &[EditOp::DelVertex { vertex: 0 }]).unwrap_err();
        assert_eq!(e.index, 0);
        assert!(e.reason.contains("isolated"));

        let e = check_edit_path(&g, &g, &[EditOp::DelEdge { u: 0, v: 3 }]).unwrap_err();
        assert!(e.reason.contains("no such edge"));

        let dup = EditOp::InsEdge { u: 0, v: 1, label: Label(0) };
        let e = check_edit_path(&g, &g, &[dup]).unwrap_err();
        assert!(e.reason.contains("already exists"));

        let e = check_edit_path(&g, &g, &[EditOp::InsVertex { vertex: 2, label: Label(0) }]).unwrap_err();
        assert!(e.reason.contains("in use"));
    }

    #[test]
    fn deletions_then_insertions() {
        let (_, g, _) = fixtures::cycle_star();
        let ops = [
            EditOp::DelEdge { u: 0, v: 1 },
            EditOp::DelEdge { u: 0, v: 2 },
            EditOp::DelVertex { vertex: 0 },
            EditOp::InsVertex { vertex: 4, label: Label(7) },
            EditOp::InsEdge { u: 4, v: 3, label: Label(7) },
        ];
        let out = apply_edit_path(&g, &ops).unwrap();
        assert_eq!(out.vertex_count(), 4);
        assert_eq!(out.edge_count(), 3);
    }
}
