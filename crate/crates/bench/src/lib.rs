//! Fixed workloads shared by the benchmarks.

use ged_core::gen::{generate, GenConfig};
use ged_core::{GraphRecord, LabeledGraph};

/// A seeded database of `graphs` graphs with `min..=max` vertices.
pub fn database(graphs: usize, min: usize, max: usize, density: f64, labels: usize, seed: u64) -> Vec<GraphRecord> {
    let config = GenConfig {
        graphs,
        min_vertices: min,
        max_vertices: max,
        density,
        vertex_labels: labels,
        edge_labels: labels,
        seed,
    };
    generate(&config).expect("benchmark parameters are valid").1
}

/// Consecutive pairs `(0, 1), (2, 3), ...` drawn from a seeded database.
pub fn pairs(
    count: usize,
    vertices: usize,
    density: f64,
    labels: usize,
    seed: u64,
) -> Vec<(LabeledGraph, LabeledGraph)> {
    let db = database(2 * count, vertices, vertices, density, labels, seed);
    db.chunks_exact(2).map(|c| (c[0].graph.clone(), c[1].graph.clone())).collect()
}
