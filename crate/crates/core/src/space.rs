//! The mapping search tree: vertex processing order and successor generation.
//!
//! Layer `l` of the tree holds mappings of the first `l` source vertices in
//! processing order. Once every source vertex is mapped, a single leaf appends
//! the insertions of all remaining target vertices.
//!
//! Two generators are provided. [`SuccessorPolicy::Basic`] tries every unused
//! target plus the dummy. [`SuccessorPolicy::Reduced`] only tries the smallest
//! unused member of each target class, and offers the dummy only while more
//! source than target vertices remain unmapped, so every complete mapping has
//! length `max(|V_G|, |V_Q|)` and no two share a canonical code.

use serde::Serialize;

use crate::bounds;
use crate::graph::LabeledGraph;
use crate::mapping::{ExtVertex, GraphMapping, MappingState};
use crate::partition::VertexPartition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuccessorPolicy {
    Basic,
    #[default]
    Reduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderPolicy {
    /// Vertex id order.
    Default,
    /// Depth-first from low-degree vertices, see [`determine_order`].
    #[default]
    Dfs,
}

/// Order in which source vertices are assigned, one per layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ProcessingOrder(Vec<usize>);

impl ProcessingOrder {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_vec(order: Vec<usize>) -> Self {
        let mut seen = vec![false; order.len()];
        for &u in &order {
            assert!(u < order.len() && !seen[u], "not a permutation");
            seen[u] = true;
        }
        Self(order)
    }

    pub fn for_policy(g: &LabeledGraph, policy: OrderPolicy) -> Self {
        match policy {
            OrderPolicy::Default => Self::identity(g.vertex_count()),
            OrderPolicy::Dfs => determine_order(g),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Depth-first order that starts from, and always descends into, the
/// unvisited vertex of smallest `(degree, id)`.
pub fn determine_order(g: &LabeledGraph) -> ProcessingOrder {
    let n = g.vertex_count();
    let mut rank: Vec<usize> = (0..n).collect();
    rank.sort_by_key(|&u| (g.degree(u), u));
    let mut position = vec![0; n];
    for (i, &u) in rank.iter().enumerate() {
        position[u] = i;
    }
    let neighbors_by_rank: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            let mut ns: Vec<usize> = g.neighborhood(u).iter().map(|&(v, _)| v).collect();
            ns.sort_by_key(|&v| position[v]);
            ns
        })
        .collect();

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    // (vertex, index of next neighbor to try)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for &start in &rank {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        order.push(start);
        stack.push((start, 0));
        while let Some((u, next)) = stack.last_mut() {
            let ns = &neighbors_by_rank[*u];
            while *next < ns.len() && visited[ns[*next]] {
                *next += 1;
            }
            if *next == ns.len() {
                stack.pop();
                continue;
            }
            let v = ns[*next];
            visited[v] = true;
            order.push(v);
            stack.push((v, 0));
        }
    }
    ProcessingOrder(order)
}

/// How a node is extended to one successor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// Map the next source vertex in processing order to this target.
    Assign(ExtVertex),
    /// All source vertices are mapped; insert every remaining target.
    InsertRemaining,
}

/// A search tree node. `layer` is the node's depth; a leaf produced by
/// [`Extension::InsertRemaining`] sits one layer below its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchNode {
    pub id: u64,
    pub parent: Option<u64>,
    pub layer: usize,
    pub mapping: GraphMapping,
    pub g: u32,
    pub h: u32,
    pub f: u32,
    pub visited: bool,
}

impl SearchNode {
    pub fn is_leaf(&self) -> bool {
        self.mapping.is_complete()
    }
}

/// Everything successor generation needs about one `(G, Q)` pair.
#[derive(Clone, Debug)]
pub struct SearchSpace<'a> {
    pub g: &'a LabeledGraph,
    pub q: &'a LabeledGraph,
    pub partition: VertexPartition,
    pub order: ProcessingOrder,
}

impl<'a> SearchSpace<'a> {
    pub fn new(g: &'a LabeledGraph, q: &'a LabeledGraph, order: ProcessingOrder) -> Self {
        assert_eq!(order.len(), g.vertex_count());
        Self { g, q, partition: VertexPartition::new(q), order }
    }

    pub fn with_policy(g: &'a LabeledGraph, q: &'a LabeledGraph, policy: OrderPolicy) -> Self {
        Self::new(g, q, ProcessingOrder::for_policy(g, policy))
    }

    /// Successor moves of a node at `layer` whose mapping is `state`.
    /// Returns nothing for a complete mapping.
    pub fn extensions(&self, policy: SuccessorPolicy, state: &MappingState, layer: usize) -> Vec<Extension> {
        let n_g = self.g.vertex_count();
        let unmapped_targets = state.unmapped_targets();
        if layer >= n_g {
            return if unmapped_targets > 0 { vec![Extension::InsertRemaining] } else { Vec::new() };
        }
        let unmapped_sources = n_g - layer;
        let mut out = Vec::new();
        match policy {
            SuccessorPolicy::Basic => {
                out.extend(
                    (0..self.q.vertex_count())
                        .filter(|&v| !state.target_mapped(v))
                        .map(|v| Extension::Assign(ExtVertex::Vertex(v))),
                );
                out.push(Extension::Assign(ExtVertex::Dummy));
            }
            SuccessorPolicy::Reduced => {
                for class in self.partition.classes() {
                    if let Some(&v) = class.iter().find(|&&v| !state.target_mapped(v)) {
                        out.push(Extension::Assign(ExtVertex::Vertex(v)));
                    }
                }
                if unmapped_sources > unmapped_targets {
                    out.push(Extension::Assign(ExtVertex::Dummy));
                }
            }
        }
        out
    }

    /// Applies `ext` to a node's state, returning the cost it adds.
    pub fn apply(&self, state: &mut MappingState, layer: usize, ext: Extension) -> u32 {
        match ext {
            Extension::Assign(z) => {
                let u = self.order.as_slice()[layer];
                let cost = state.extension_cost(self.g, self.q, u, z);
                state.assign(ExtVertex::Vertex(u), z);
                cost
            }
            Extension::InsertRemaining => {
                let cost = state.insertion_cost(self.q);
                for v in 0..self.q.vertex_count() {
                    if !state.target_mapped(v) {
                        state.assign(ExtVertex::Dummy, ExtVertex::Vertex(v));
                    }
                }
                cost
            }
        }
    }

    pub fn root(&self, next_id: &mut u64) -> SearchNode {
        let mapping = GraphMapping::new(self.g.vertex_count(), self.q.vertex_count());
        let h = bounds::h_estimate(&MappingState::of(&mapping), self.g, self.q);
        let id = *next_id;
        *next_id += 1;
        SearchNode { id, parent: None, layer: 0, mapping, g: 0, h, f: h, visited: false }
    }

    /// Every successor of `r`, each with fresh id, accumulated cost and heuristic.
    pub fn successors(&self, policy: SuccessorPolicy, r: &SearchNode, next_id: &mut u64) -> Vec<SearchNode> {
        let state = MappingState::of(&r.mapping);
        self.extensions(policy, &state, r.layer)
            .into_iter()
            .map(|ext| {
                let mut child_state = state.clone();
                let delta = self.apply(&mut child_state, r.layer, ext);
                let mut mapping = r.mapping.clone();
                match ext {
                    Extension::Assign(z) => mapping.push(ExtVertex::Vertex(self.order.as_slice()[r.layer]), z),
                    Extension::InsertRemaining => mapping.complete_with_insertions(),
                }
                let g = r.g + delta;
                let h = bounds::h_estimate(&child_state, self.g, self.q);
                let id = *next_id;
                *next_id += 1;
                SearchNode { id, parent: Some(r.id), layer: r.layer + 1, mapping, g, h, f: g + h, visited: false }
            })
            .collect()
    }

    /// Successors trying every unused target and the dummy.
    pub fn basic_gen_succr(&self, r: &SearchNode, next_id: &mut u64) -> Vec<SearchNode> {
        self.successors(SuccessorPolicy::Basic, r, next_id)
    }

    /// Successors restricted to class-minimal targets, with the dummy only
    /// while unmapped sources outnumber unmapped targets.
    pub fn gen_succr(&self, r: &SearchNode, next_id: &mut u64) -> Vec<SearchNode> {
        self.successors(SuccessorPolicy::Reduced, r, next_id)
    }

    /// Expands the whole tree. Each leaf's accumulated cost is checked against
    /// the batch edit cost in debug builds.
    pub fn full_tree(&self, policy: SuccessorPolicy) -> FullTree {
        let mut tree = FullTree { layer_counts: Vec::new(), leaves: Vec::new() };
        let mut state = MappingState::new(self.g.vertex_count(), self.q.vertex_count());
        let mut mapping = GraphMapping::new(self.g.vertex_count(), self.q.vertex_count());
        self.walk(policy, &mut state, &mut mapping, 0, 0, &mut tree);
        tree
    }

    fn walk(
        &self,
        policy: SuccessorPolicy,
        state: &mut MappingState,
        mapping: &mut GraphMapping,
        layer: usize,
        cost: u32,
        tree: &mut FullTree,
    ) {
        if tree.layer_counts.len() <= layer {
            tree.layer_counts.push(0);
        }
        tree.layer_counts[layer] += 1;
        let exts = self.extensions(policy, state, layer);
        if exts.is_empty() {
            debug_assert_eq!(cost, crate::mapping::edit_cost(mapping, self.g, self.q).total);
            tree.leaves.push((mapping.clone(), cost));
            return;
        }
        for ext in exts {
            let mut child_state = state.clone();
            let mut child_mapping = mapping.clone();
            let delta = self.apply(&mut child_state, layer, ext);
            match ext {
                Extension::Assign(z) => child_mapping.push(ExtVertex::Vertex(self.order.as_slice()[layer]), z),
                Extension::InsertRemaining => child_mapping.complete_with_insertions(),
            }
            self.walk(policy, &mut child_state, &mut child_mapping, layer + 1, cost + delta, tree);
        }
    }
}

/// Result of expanding a tree completely.
#[derive(Clone, Debug)]
pub struct FullTree {
    /// Node count per depth, root at index 0.
    pub layer_counts: Vec<u64>,
    /// Complete mappings with their edit costs, in generation order.
    pub leaves: Vec<(GraphMapping, u32)>,
}

impl FullTree {
    pub fn min_cost(&self) -> Option<u32> {
        self.leaves.iter().map(|&(_, c)| c).min()
    }
}

/// Predicted number of reduced-tree nodes in layer `l`.
///
/// Nodes of layer `l` correspond one-to-one to class words of length `l` in
/// which class `m` occurs at most `|V_Q^m|` times and the dummy class at most
/// `max(0, |V_G| - |V_Q|)` times; the count is the sum of multinomials
/// `l! / Π x_m!` over all admissible occurrence vectors `x`.
pub fn predicted_layer_count(l: usize, g_size: usize, q_size: usize, class_sizes: &[usize]) -> u128 {
    assert!(l <= g_size, "layer {l} beyond |V_G| = {g_size}");
    let dummy_cap = g_size.saturating_sub(q_size);
    // words[k] = number of words of length k over the classes folded in so far
    let mut words = vec![0u128; l + 1];
    words[0] = 1;
    for &cap in class_sizes.iter().chain(std::iter::once(&dummy_cap)) {
        let mut next = vec![0u128; l + 1];
        for (k, &w) in words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for x in 0..=cap.min(l - k) {
                next[k + x] += w * binomial(k + x, x);
            }
        }
        words = next;
    }
    words[l]
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use ExtVertex::Vertex;

    #[test]
    fn dfs_order_from_low_degree() {
        let (_, g, _) = fixtures::five_six();
        assert_eq!(determine_order(&g).as_slice(), &[1, 3, 0, 2, 4]);
    }

    #[test]
    fn edgeless_order_is_id_order() {
        let g = LabeledGraph::new(vec![crate::graph::Label(0); 4], &[]).unwrap();
        assert_eq!(determine_order(&g).as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn order_covers_every_component() {
        let l = crate::graph::Label(0);
        let g = LabeledGraph::new(vec![l; 6], &[(0, 1, l), (1, 2, l), (3, 4, l), (4, 5, l), (3, 5, l)]).unwrap();
        let mut order = determine_order(&g).as_slice().to_vec();
        order.sort();
        assert_eq!(order, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn reduced_root_branches_on_class_minima() {
        let (_, g, q) = fixtures::cycle_star();
        let space = SearchSpace::new(&g, &q, ProcessingOrder::identity(4));
        let mut ids = 0;
        let root = space.root(&mut ids);
        let succ = space.gen_succr(&root, &mut ids);
        let targets: Vec<_> = succ.iter().map(|n| n.mapping.target_of(0).unwrap()).collect();
        assert_eq!(targets, vec![Vertex(0), Vertex(3)]);

        let basic = space.basic_gen_succr(&root, &mut ids);
        assert_eq!(basic.len(), 5);
        assert!(basic.last().unwrap().mapping.target_of(0).unwrap().is_dummy());
    }

    #[test]
    fn reduced_tree_on_cycle_star() {
        let (_, g, q) = fixtures::cycle_star();
        let space = SearchSpace::new(&g, &q, ProcessingOrder::identity(4));
        let tree = space.full_tree(SuccessorPolicy::Reduced);
        assert_eq!(tree.leaves.len(), 4);
        assert_eq!(tree.min_cost(), Some(4));
        assert_eq!(tree.layer_counts, vec![1, 2, 3, 4, 4]);
        let basic = space.full_tree(SuccessorPolicy::Basic);
        assert_eq!(basic.min_cost(), Some(4));
        assert!(basic.leaves.len() > tree.leaves.len());
    }

    #[test]
    fn final_layer_emits_one_insertion_leaf() {
        let (_, g, q) = fixtures::cycle_star();
        // map the 4-cycle's first two vertices only by using a 2-vertex source
        let small = LabeledGraph::new(vec![g.label(1), g.label(3)], &[(0, 1, g.edge_label(1, 3).unwrap())]).unwrap();
        let space = SearchSpace::new(&small, &q, ProcessingOrder::identity(2));
        let mut ids = 0;
        let mut node = space.root(&mut ids);
        for _ in 0..2 {
            node = space.gen_succr(&node, &mut ids).remove(0);
        }
        let leaf = space.gen_succr(&node, &mut ids);
        assert_eq!(leaf.len(), 1);
        assert!(leaf[0].is_leaf());
        assert_eq!(leaf[0].mapping.len(), 4);
        assert_eq!(leaf[0].h, 0);
        assert_eq!(leaf[0].g, crate::mapping::edit_cost(&leaf[0].mapping, &small, &q).total);
    }

    #[test]
    fn equal_sizes_never_use_the_dummy() {
        let (_, g, q) = fixtures::cycle_star();
        let space = SearchSpace::new(&g, &q, ProcessingOrder::identity(4));
        for (m, _) in space.full_tree(SuccessorPolicy::Reduced).leaves {
            assert!(m.targets().all(|t| !t.is_dummy()));
        }
    }

    #[test]
    fn predicted_counts_on_cycle_star() {
        assert_eq!(predicted_layer_count(4, 4, 4, &[3, 1]), 4);
        assert_eq!(predicted_layer_count(0, 4, 4, &[3, 1]), 1);
        assert_eq!(predicted_layer_count(1, 4, 4, &[3, 1]), 2);
        assert_eq!(predicted_layer_count(3, 4, 4, &[3, 1]), 4);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(0, 0), 1);
    }
}
