//! Seeded random labeled graphs.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::graph::{Label, LabelTable, LabeledGraph};
use crate::parse::GraphRecord;

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub graphs: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Fraction of vertex pairs joined by an edge, in (0, 1].
    pub density: f64,
    pub vertex_labels: usize,
    pub edge_labels: usize,
    pub seed: u64,
}

impl GenConfig {
    fn validate(&self) -> Result<(), GenError> {
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(GenError::Density(self.density));
        }
        if self.graphs == 0 {
            return Err(GenError::ZeroCount("graph count"));
        }
        if self.vertex_labels == 0 {
            return Err(GenError::ZeroCount("vertex label count"));
        }
        if self.edge_labels == 0 {
            return Err(GenError::ZeroCount("edge label count"));
        }
        if self.min_vertices > self.max_vertices {
            return Err(GenError::VertexRange { min: self.min_vertices, max: self.max_vertices });
        }
        Ok(())
    }
}

/// Edge count for `n` vertices at `density`: `round(density * n(n-1)/2)`.
pub fn edge_count_for(n: usize, density: f64) -> usize {
    let pairs = n * n.saturating_sub(1) / 2;
    ((density * pairs as f64).round() as usize).min(pairs)
}

/// One graph on `n` vertices with labels drawn uniformly from
/// `0..vertex_labels` and `0..edge_labels`, edges sampled without replacement.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64, vertex_labels: u32, edge_labels: u32) -> LabeledGraph {
    let labels: Vec<Label> = (0..n).map(|_| Label(rng.random_range(0..vertex_labels))).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = edge_count_for(n, density);
    let mut chosen: Vec<usize> = index::sample(rng, pairs.len(), m).into_vec();
    chosen.sort_unstable();
    let edges: Vec<_> =
        chosen.into_iter().map(|i| (pairs[i].0, pairs[i].1, Label(rng.random_range(0..edge_labels)))).collect();
    LabeledGraph::new(labels, &edges).expect("sampled pairs are distinct and loop-free")
}

/// Generates a database. Vertex labels are named `A`, `B`, ... (then `L26`,
/// ...), edge labels `a`, `b`, ... (then `l26`, ...); graph ids are `g0`, `g1`, ...
pub fn generate(config: &GenConfig) -> Result<(LabelTable, Vec<GraphRecord>), GenError> {
    config.validate()?;
    let mut table = LabelTable::default();
    let vertex_names: Vec<Label> = (0..config.vertex_labels).map(|i| table.intern(&label_name(i, b'A', 'L'))).collect();
    let edge_names: Vec<Label> = (0..config.edge_labels).map(|i| table.intern(&label_name(i, b'a', 'l'))).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::with_capacity(config.graphs);
    for i in 0..config.graphs {
        let n = rng.random_range(config.min_vertices..=config.max_vertices);
        let raw = random_graph(&mut rng, n, config.density, config.vertex_labels as u32, config.edge_labels as u32);
        let labels: Vec<Label> = raw.vertex_labels().iter().map(|l| vertex_names[l.0 as usize]).collect();
        let edges: Vec<_> = raw.edges().iter().map(|e| (e.u, e.v, edge_names[e.label.0 as usize])).collect();
        let graph = LabeledGraph::new(labels, &edges).expect("relabeling keeps the graph simple");
        records.push(GraphRecord { id: format!("g{i}"), graph });
    }
    Ok((table, records))
}

fn label_name(i: usize, first: u8, prefix: char) -> String {
    if i < 26 {
        char::from(first + i as u8).to_string()
    } else {
        format!("{prefix}{i}")
    }
}
