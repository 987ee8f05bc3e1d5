//! Threshold similarity search: lower-bound filtering, then capped search.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{lb_profiles, GraphProfile};
use crate::bss::{bss_ged, BssConfig, Outcome};
use crate::graph::LabeledGraph;
use crate::parse::GraphRecord;
use crate::partition::VertexPartition;

/// Graphs with their filtering profiles precomputed.
#[derive(Clone, Debug)]
pub struct GraphDatabase {
    records: Vec<GraphRecord>,
    profiles: Vec<GraphProfile>,
    partitions: Vec<VertexPartition>,
}

impl GraphDatabase {
    pub fn new(records: Vec<GraphRecord>) -> Self {
        let profiles = records.iter().map(|r| GraphProfile::of(&r.graph)).collect();
        let partitions = records.iter().map(|r| VertexPartition::new(&r.graph)).collect();
        Self { records, profiles, partitions }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[GraphRecord] {
        &self.records
    }

    pub fn graph(&self, i: usize) -> &LabeledGraph {
        &self.records[i].graph
    }

    pub fn id(&self, i: usize) -> &str {
        &self.records[i].id
    }

    pub fn profile(&self, i: usize) -> &GraphProfile {
        &self.profiles[i]
    }

    pub fn partition(&self, i: usize) -> &VertexPartition {
        &self.partitions[i]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.records.iter().position(|r| r.id == id)
    }
}

/// Database positions whose lower bound against `q` is at most `tau`, paired
/// with that bound, ordered by ascending bound then position.
pub fn filter(db: &GraphDatabase, q: &LabeledGraph, tau: u32) -> Vec<(usize, u32)> {
    let qp = GraphProfile::of(q);
    let mut out: Vec<(usize, u32)> =
        (0..db.len()).map(|i| (i, lb_profiles(db.profile(i), &qp))).filter(|&(_, lb)| lb <= tau).collect();
    out.sort_by_key(|&(i, lb)| (lb, i));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Some mapping costs `bound ≤ τ`; `exact` when `bound` is known to be
    /// the distance.
    Within {
        bound: u32,
        exact: bool,
    },
    Beyond,
    /// The search hit its budget before deciding.
    Unknown,
}

/// Decides whether `ged(g, q) ≤ tau`, stopping at the first mapping within
/// the threshold. `config.initial_ub` and `config.stop_at` are overridden.
pub fn verify_within(g: &LabeledGraph, q: &LabeledGraph, tau: u32, config: &BssConfig) -> Verdict {
    let lb = crate::bounds::lb_graph(g, q);
    if lb > tau {
        return Verdict::Beyond;
    }
    verify_with_lb(g, q, tau, lb, config)
}

fn verify_with_lb(g: &LabeledGraph, q: &LabeledGraph, tau: u32, lb: u32, config: &BssConfig) -> Verdict {
    let capped = BssConfig { initial_ub: Some(tau.saturating_add(1)), stop_at: Some(tau), ..config.clone() };
    let r = bss_ged(g, q, &capped);
    match r.outcome {
        Outcome::BudgetExhausted | Outcome::TimedOut => Verdict::Unknown,
        _ if r.mapping.is_some() && r.distance <= tau => {
            Verdict::Within { bound: r.distance, exact: r.outcome == Outcome::Exact || r.distance == lb }
        }
        _ => Verdict::Beyond,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Match {
    pub id: String,
    pub bound: u32,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QueryResult {
    /// In database order.
    pub matches: Vec<Match>,
    /// Candidates whose verification ran out of budget.
    pub unknown: Vec<String>,
    pub filtered: usize,
    pub candidates: usize,
    pub filter_time: Duration,
    pub verify_time: Duration,
}

/// Filters `db` against `q`, then verifies every candidate on `threads`
/// worker threads. The result does not depend on the thread count.
pub fn range_query(db: &GraphDatabase, q: &LabeledGraph, tau: u32, config: &BssConfig, threads: usize) -> QueryResult {
    let t0 = Instant::now();
    let candidates = filter(db, q, tau);
    let filter_time = t0.elapsed();

    let t1 = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().expect("thread pool construction");
    let mut verdicts: Vec<(usize, Verdict)> = pool.install(|| {
        candidates.par_iter().map(|&(i, lb)| (i, verify_with_lb(db.graph(i), q, tau, lb, config))).collect()
    });
    let verify_time = t1.elapsed();

    verdicts.sort_by_key(|&(i, _)| i);
    let mut matches = Vec::new();
    let mut unknown = Vec::new();
    for (i, v) in verdicts {
        match v {
            Verdict::Within { bound, exact } => matches.push(Match { id: db.id(i).to_owned(), bound, exact }),
            Verdict::Unknown => unknown.push(db.id(i).to_owned()),
            Verdict::Beyond => {}
        }
    }
    QueryResult {
        matches,
        unknown,
        filtered: db.len() - candidates.len(),
        candidates: candidates.len(),
        filter_time,
        verify_time,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Label;

    fn db() -> (GraphDatabase, LabeledGraph) {
        let (_, g, q) = fixtures::cycle_star();
        let (_, g5, q6) = fixtures::five_six();
        let recs = [("cycle", g), ("star", q.clone()), ("five", g5), ("six", q6), ("star2", q.permuted(&[3, 2, 1, 0]))]
            .into_iter()
            .map(|(id, graph)| GraphRecord { id: id.to_owned(), graph })
            .collect();
        (GraphDatabase::new(recs), q)
    }

    #[test]
    fn threshold_on_the_cycle_star_pair() {
        let (_, g, q) = fixtures::cycle_star();
        let cfg = BssConfig::default();
        assert!(matches!(verify_within(&g, &q, 4, &cfg), Verdict::Within { bound: 4, .. }));
        assert_eq!(verify_within(&g, &q, 3, &cfg), Verdict::Beyond);
        assert_eq!(verify_within(&q, &q, 0, &cfg), Verdict::Within { bound: 0, exact: true });
    }

    #[test]
    fn exact_self_matches() {
        let (db, q) = db();
        let r = range_query(&db, &q, 0, &BssConfig::default(), 2);
        let ids: Vec<_> = r.matches.iter().map(|m| m.id.as_str()).collect();
        assert_eq!(ids, ["star", "star2"]);
        assert_eq!(r.filtered + r.candidates, db.len());
    }

    #[test]
    fn large_threshold_keeps_everything() {
        let (db, q) = db();
        let r = range_query(&db, &q, 100, &BssConfig::default(), 1);
        assert_eq!(r.filtered, 0);
        assert_eq!(r.matches.len(), db.len());
    }

    #[test]
    fn thread_count_does_not_matter() {
        let (db, q) = db();
        for tau in 0..6 {
            let a = range_query(&db, &q, tau, &BssConfig::with_beam(1), 1);
            let b = range_query(&db, &q, tau, &BssConfig::with_beam(1), 4);
            assert_eq!(a.matches, b.matches);
        }
    }

    #[test]
    fn budget_failures_are_reported() {
        let (db, _) = db();
        let cfg = BssConfig { node_budget: 1, ..BssConfig::default() };
        let q = db.graph(3).clone();
        let r = range_query(&db, &q, 10, &cfg, 1);
        assert!(!r.unknown.is_empty());
        assert_eq!(verify_within(db.graph(2), &q, 10, &cfg), Verdict::Unknown);
    }

    #[test]
    fn precomputed_profiles_match() {
        let (db, _) = db();
        for i in 0..db.len() {
            assert_eq!(db.profile(i), &GraphProfile::of(db.graph(i)));
            assert_eq!(db.partition(i), &VertexPartition::new(db.graph(i)));
        }
        let empty = LabeledGraph::new(vec![Label(0)], &[]).unwrap();
        assert_eq!(filter(&db, &empty, 0).len(), 0);
    }
}
