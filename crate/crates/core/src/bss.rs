//! Beam-stack search for exact graph edit distance.
//!
//! Each pass is a beam search that keeps the best `w` nodes per layer and
//! records, per layer, the half-open range of `f` values it admitted. After a
//! pass the stack is unwound to the deepest layer whose range was cut short
//! by the beam, that range is shifted past the cut, and the next pass
//! re-expands from there. The search ends when every range reaches `ub`.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bounds;
use crate::graph::LabeledGraph;
use crate::mapping::{ExtVertex, GraphMapping, MappingState};
use crate::space::{Extension, OrderPolicy, ProcessingOrder, SearchSpace, SuccessorPolicy};

#[derive(Clone, Debug)]
pub struct BssConfig {
    pub beam_width: usize,
    pub order: OrderPolicy,
    pub successors: SuccessorPolicy,
    /// Maximum number of search nodes generated before giving up.
    pub node_budget: u64,
    /// Starting upper bound; capped at the trivial bound plus one.
    pub initial_ub: Option<u32>,
    /// Stop as soon as a complete mapping of at most this cost is found.
    pub stop_at: Option<u32>,
    pub time_limit: Option<Duration>,
}

impl Default for BssConfig {
    fn default() -> Self {
        Self {
            beam_width: 15,
            order: OrderPolicy::Dfs,
            successors: SuccessorPolicy::Reduced,
            node_budget: 10_000_000,
            initial_ub: None,
            stop_at: None,
            time_limit: None,
        }
    }
}

impl BssConfig {
    pub fn with_beam(beam_width: usize) -> Self {
        Self { beam_width, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The search finished; `distance` is the edit distance, or the initial
    /// upper bound if nothing cheaper exists.
    Exact,
    /// Stopped early on a mapping within `stop_at`.
    Threshold,
    BudgetExhausted,
    TimedOut,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    /// Calls to node expansion, counting repeat visits.
    pub expanded: u64,
    pub generated: u64,
    /// Interval shifts after a pass.
    pub backtracks: u64,
    pub passes: u64,
    /// Largest number of nodes held in one layer's open list.
    pub max_open: usize,
    /// Most expansions of any single node.
    pub max_node_visits: u32,
    /// Upper bound after each pass.
    pub ub_history: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct GedResult {
    pub distance: u32,
    pub outcome: Outcome,
    /// Complete mapping of cost `distance`, if one was found.
    pub mapping: Option<GraphMapping>,
    pub stats: SearchStats,
}

impl GedResult {
    pub fn is_exact(&self) -> bool {
        self.outcome == Outcome::Exact
    }
}

/// Half-open cost range `[f_min, f_max)` admitted into the next layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    pub f_min: u32,
    pub f_max: u32,
}

impl Interval {
    pub fn contains(&self, f: u32) -> bool {
        self.f_min <= f && f < self.f_max
    }
}

#[derive(Clone, Debug, Default)]
pub struct BeamStack(Vec<Interval>);

impl BeamStack {
    pub fn push(&mut self, iv: Interval) {
        debug_assert!(iv.f_min <= iv.f_max);
        self.0.push(iv);
    }

    pub fn pop(&mut self) -> Option<Interval> {
        self.0.pop()
    }

    pub fn top(&self) -> Option<&Interval> {
        self.0.last()
    }

    pub fn top_mut(&mut self) -> Option<&mut Interval> {
        self.0.last_mut()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pops every interval whose upper end has reached `ub`, then shifts the
    /// new top to `[old f_max, ub)`. Returns false when the stack empties.
    pub fn backtrack(&mut self, ub: u32) -> bool {
        while self.top().is_some_and(|iv| iv.f_max >= ub) {
            self.0.pop();
        }
        match self.top_mut() {
            None => false,
            Some(top) => {
                top.f_min = top.f_max;
                top.f_max = ub;
                true
            }
        }
    }
}

/// Cost of deleting all of `g` and inserting all of `q`.
pub fn trivial_upper_bound(g: &LabeledGraph, q: &LabeledGraph) -> u32 {
    (g.vertex_count() + q.vertex_count() + g.edge_count() + q.edge_count()) as u32
}

pub fn bss_ged(g: &LabeledGraph, q: &LabeledGraph, config: &BssConfig) -> GedResult {
    let space = SearchSpace::with_policy(g, q, config.order);
    bss_ged_in(&space, config)
}

/// Runs the search over a prepared space (the caller picks the order).
pub fn bss_ged_in(space: &SearchSpace<'_>, config: &BssConfig) -> GedResult {
    assert!(config.beam_width >= 1, "beam width must be positive");
    Engine::new(space, config).run()
}

type NodeId = u32;

#[derive(Clone, Debug)]
struct Node {
    parent: Option<NodeId>,
    ext: Option<Extension>,
    layer: u32,
    g: u32,
    f: u32,
    complete: bool,
    visited: bool,
    removed: bool,
    visits: u32,
}

enum Halt {
    Budget,
    Time,
}

struct Engine<'s, 'a> {
    space: &'s SearchSpace<'a>,
    config: &'s BssConfig,
    nodes: Vec<Node>,
    open: Vec<Vec<NodeId>>,
    cache: HashMap<NodeId, Vec<NodeId>>,
    bs: BeamStack,
    ub: u32,
    best_leaf: Option<NodeId>,
    deadline: Option<Instant>,
    stats: SearchStats,
}

impl<'s, 'a> Engine<'s, 'a> {
    fn new(space: &'s SearchSpace<'a>, config: &'s BssConfig) -> Self {
        let sentinel = trivial_upper_bound(space.g, space.q) + 1;
        let ub = config.initial_ub.map_or(sentinel, |u| u.min(sentinel));
        Self {
            space,
            config,
            nodes: Vec::new(),
            open: vec![Vec::new(); space.g.vertex_count() + 2],
            cache: HashMap::new(),
            bs: BeamStack::default(),
            ub,
            best_leaf: None,
            deadline: config.time_limit.map(|d| Instant::now() + d),
            stats: SearchStats::default(),
        }
    }

    fn run(mut self) -> GedResult {
        let root_state = MappingState::new(self.space.g.vertex_count(), self.space.q.vertex_count());
        let h = bounds::h_estimate(&root_state, self.space.g, self.space.q);
        let complete = self.space.g.vertex_count() == 0 && self.space.q.vertex_count() == 0;
        self.nodes.push(Node {
            parent: None,
            ext: None,
            layer: 0,
            g: 0,
            f: h,
            complete,
            visited: false,
            removed: false,
            visits: 0,
        });
        self.stats.generated = 1;
        self.open[0].push(0);
        self.bs.push(Interval { f_min: 0, f_max: self.ub });

        let outcome = loop {
            let l = self.bs.len() - 1;
            let halted = self.search(l);
            self.stats.passes += 1;
            self.stats.ub_history.push(self.ub);
            match halted {
                Some(Halt::Budget) => break Outcome::BudgetExhausted,
                Some(Halt::Time) => break Outcome::TimedOut,
                None => {}
            }
            if self.config.stop_at.is_some_and(|t| self.best_leaf.is_some() && self.ub <= t) {
                break Outcome::Threshold;
            }
            if !self.bs.backtrack(self.ub) {
                break Outcome::Exact;
            }
            self.stats.backtracks += 1;
        };

        self.stats.max_node_visits = self.nodes.iter().map(|n| n.visits).max().unwrap_or(0);
        let mapping = self.best_leaf.map(|id| self.mapping_of(id));
        let mut distance = self.ub;
        if self.best_leaf.is_none() && self.config.initial_ub.is_none() {
            // no leaf reached yet: deleting and reinserting everything is still a bound
            distance = distance.min(trivial_upper_bound(self.space.g, self.space.q));
        }
        GedResult { distance, outcome, mapping, stats: self.stats }
    }

    fn rank(&self, id: NodeId) -> (u32, std::cmp::Reverse<u32>, NodeId) {
        let n = &self.nodes[id as usize];
        (n.f, std::cmp::Reverse(n.g), id)
    }

    /// One beam-search pass starting at layer `l`.
    fn search(&mut self, mut l: usize) -> Option<Halt> {
        let mut pql: Vec<NodeId> =
            self.open[l].iter().copied().filter(|&id| !self.nodes[id as usize].removed).collect();
        let mut pqll: Vec<NodeId> = Vec::new();
        while !pql.is_empty() || !pqll.is_empty() {
            // best last, so popping yields the minimum
            pql.sort_unstable_by_key(|&id| std::cmp::Reverse(self.rank(id)));
            while let Some(r) = pql.pop() {
                let node = &self.nodes[r as usize];
                if node.complete {
                    if node.g < self.ub {
                        self.ub = node.g;
                        self.best_leaf = Some(r);
                    }
                    if pqll.is_empty() {
                        return None;
                    }
                    // Basic successors can mix complete and partial mappings in
                    // one layer. Everything left in this layer costs at least
                    // as much as r, but the successors already collected may not.
                    pqll.retain(|&n| self.nodes[n as usize].f < self.ub);
                    break;
                }
                match self.expand_node(r) {
                    Ok(succ) => pqll.extend(succ),
                    Err(halt) => return Some(halt),
                }
            }
            if pqll.len() > self.config.beam_width {
                pqll.sort_unstable_by_key(|&id| self.rank(id));
                let cut_min = pqll[self.config.beam_width..]
                    .iter()
                    .map(|&id| self.nodes[id as usize].f)
                    .min()
                    .expect("cut side is non-empty");
                pqll.truncate(self.config.beam_width);
                self.bs.top_mut().expect("stack has a frame per layer").f_max = cut_min;
            }
            l += 1;
            if self.open.len() <= l {
                self.open.push(Vec::new());
            }
            self.open[l] = pqll.clone();
            self.stats.max_open = self.stats.max_open.max(pqll.len());
            pql = std::mem::take(&mut pqll);
            self.bs.push(Interval { f_min: 0, f_max: self.ub });
        }
        None
    }

    /// Returns the successors of `r` admitted by the current interval.
    fn expand_node(&mut self, r: NodeId) -> Result<Vec<NodeId>, Halt> {
        self.stats.expanded += 1;
        self.nodes[r as usize].visits += 1;
        let succ = if !self.nodes[r as usize].visited {
            let succ = self.generate(r)?;
            self.cache.insert(r, succ.clone());
            self.nodes[r as usize].visited = true;
            succ
        } else {
            // a visited node without an entry had all its successors pruned
            self.cache.get(&r).cloned().unwrap_or_default()
        };
        let top = *self.bs.top().expect("stack has a frame per layer");
        let mut admitted = Vec::new();
        let mut all_pruned = true;
        for n in succ {
            let node = &self.nodes[n as usize];
            if node.f >= self.ub || node.visited {
                self.cache.remove(&n);
            } else {
                all_pruned = false;
                if top.contains(node.f) {
                    admitted.push(n);
                }
            }
        }
        if all_pruned {
            self.nodes[r as usize].removed = true;
            self.cache.remove(&r);
        }
        Ok(admitted)
    }

    fn check_limits(&self) -> Result<(), Halt> {
        if self.nodes.len() as u64 >= self.config.node_budget {
            return Err(Halt::Budget);
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Halt::Time);
        }
        Ok(())
    }

    fn generate(&mut self, r: NodeId) -> Result<Vec<NodeId>, Halt> {
        self.check_limits()?;
        let state = self.state_of(r);
        let parent = &self.nodes[r as usize];
        let (layer, g) = (parent.layer as usize, parent.g);
        let exts = self.space.extensions(self.config.successors, &state, layer);
        let n_g = self.space.g.vertex_count();
        let mut out = Vec::with_capacity(exts.len());
        for ext in exts {
            let mut child = state.clone();
            let delta = self.space.apply(&mut child, layer, ext);
            let h = bounds::h_estimate(&child, self.space.g, self.space.q);
            let complete = layer + 1 >= n_g && child.unmapped_targets() == 0;
            let id = self.nodes.len() as NodeId;
            self.nodes.push(Node {
                parent: Some(r),
                ext: Some(ext),
                layer: layer as u32 + 1,
                g: g + delta,
                f: g + delta + h,
                complete,
                visited: false,
                removed: false,
                visits: 0,
            });
            out.push(id);
        }
        self.stats.generated += out.len() as u64;
        Ok(out)
    }

    fn path_to(&self, id: NodeId) -> Vec<Extension> {
        let mut exts = Vec::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            let node = &self.nodes[c as usize];
            exts.extend(node.ext);
            cur = node.parent;
        }
        exts.reverse();
        exts
    }

    fn state_of(&self, id: NodeId) -> MappingState {
        let mut state = MappingState::new(self.space.g.vertex_count(), self.space.q.vertex_count());
        for (layer, ext) in self.path_to(id).into_iter().enumerate() {
            self.space.apply(&mut state, layer, ext);
        }
        state
    }

    fn mapping_of(&self, id: NodeId) -> GraphMapping {
        let mut mapping = GraphMapping::new(self.space.g.vertex_count(), self.space.q.vertex_count());
        for (layer, ext) in self.path_to(id).into_iter().enumerate() {
            match ext {
                Extension::Assign(z) => mapping.push(ExtVertex::Vertex(self.space.order.as_slice()[layer]), z),
                Extension::InsertRemaining => mapping.complete_with_insertions(),
            }
        }
        mapping.complete_with_insertions();
        mapping
    }
}

/// Convenience wrapper with the identity processing order.
pub fn bss_ged_identity_order(g: &LabeledGraph, q: &LabeledGraph, config: &BssConfig) -> GedResult {
    let space = SearchSpace::new(g, q, ProcessingOrder::identity(g.vertex_count()));
    bss_ged_in(&space, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Label;
    use crate::mapping::edit_cost;

    #[test]
    fn cycle_star_all_widths() {
        let (_, g, q) = fixtures::cycle_star();
        for w in [1, 2, 15, 50] {
            let r = bss_ged(&g, &q, &BssConfig::with_beam(w));
            assert_eq!(r.distance, 4, "w = {w}");
            assert!(r.is_exact());
            assert_eq!(edit_cost(r.mapping.as_ref().unwrap(), &g, &q).total, 4);
        }
    }

    #[test]
    fn cycle_star_first_pass_with_two() {
        let (_, g, q) = fixtures::cycle_star();
        let r = bss_ged(&g, &q, &BssConfig::with_beam(2));
        assert_eq!(r.stats.ub_history[0], 4);
    }

    #[test]
    fn five_six_both_policies() {
        let (_, g, q) = fixtures::five_six();
        let oracle = crate::oracle::exhaustive_ged(&g, &q).unwrap().distance;
        for succ in [SuccessorPolicy::Basic, SuccessorPolicy::Reduced] {
            for order in [OrderPolicy::Default, OrderPolicy::Dfs] {
                for w in [1, 3, 50] {
                    let cfg = BssConfig { beam_width: w, successors: succ, order, ..BssConfig::default() };
                    assert_eq!(bss_ged(&g, &q, &cfg).distance, oracle);
                    assert_eq!(bss_ged(&q, &g, &cfg).distance, oracle);
                }
            }
        }
    }

    #[test]
    fn identical_and_empty() {
        let (_, g, _) = fixtures::five_six();
        assert_eq!(bss_ged(&g, &g, &BssConfig::default()).distance, 0);
        let e = LabeledGraph::empty();
        let r = bss_ged(&e, &e, &BssConfig::default());
        assert_eq!((r.distance, r.outcome), (0, Outcome::Exact));
        assert_eq!(bss_ged(&e, &g, &BssConfig::default()).distance, 10);
        assert_eq!(bss_ged(&g, &e, &BssConfig::with_beam(1)).distance, 10);
    }

    #[test]
    fn budget_reports_best_bound() {
        let (_, g, q) = fixtures::five_six();
        let cfg = BssConfig { beam_width: 1, node_budget: 8, ..BssConfig::default() };
        let r = bss_ged(&g, &q, &cfg);
        assert_eq!(r.outcome, Outcome::BudgetExhausted);
        assert!(r.distance >= 3);
        assert!(r.distance <= trivial_upper_bound(&g, &q));
    }

    #[test]
    fn initial_bound_below_distance() {
        let (_, g, q) = fixtures::cycle_star();
        let cfg = BssConfig { initial_ub: Some(4), ..BssConfig::default() };
        let r = bss_ged(&g, &q, &cfg);
        assert_eq!((r.distance, r.outcome), (4, Outcome::Exact));
        assert!(r.mapping.is_none());
    }

    #[test]
    fn threshold_stops_early() {
        let (_, g, q) = fixtures::cycle_star();
        let cfg = BssConfig { initial_ub: Some(5), stop_at: Some(4), beam_width: 1, ..BssConfig::default() };
        let r = bss_ged(&g, &q, &cfg);
        assert_eq!(r.outcome, Outcome::Threshold);
        assert!(r.distance <= 4);
    }

    #[test]
    fn beam_stack_shift() {
        let mut bs = BeamStack::default();
        bs.push(Interval { f_min: 0, f_max: 9 });
        bs.push(Interval { f_min: 0, f_max: 3 });
        bs.push(Interval { f_min: 0, f_max: 5 });
        assert!(bs.backtrack(4));
        assert_eq!(bs.len(), 2);
        assert_eq!(*bs.top().unwrap(), Interval { f_min: 3, f_max: 4 });
        assert!(!bs.backtrack(3));
        assert!(bs.is_empty());
    }

    #[test]
    fn ub_history_non_increasing() {
        let l = |t| Label(t);
        let g = LabeledGraph::new(
            vec![l(0), l(1), l(0), l(1), l(0)],
            &[(0, 1, l(0)), (1, 2, l(0)), (2, 3, l(1)), (3, 4, l(0))],
        )
        .unwrap();
        let q =
            LabeledGraph::new(vec![l(1), l(0), l(0), l(0)], &[(0, 1, l(1)), (0, 2, l(0)), (0, 3, l(0)), (2, 3, l(0))])
                .unwrap();
        let r = bss_ged(&g, &q, &BssConfig::with_beam(1));
        assert!(r.stats.ub_history.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.stats.max_node_visits as usize <= q.vertex_count() + 3);
        assert_eq!(r.distance, crate::oracle::exhaustive_ged(&g, &q).unwrap().distance);
    }
}
