//! Small hand-checked graph pairs used throughout the tests and docs.

use crate::graph::{LabelTable, LabeledGraph};
use crate::parse::parse_graph_db;

/// A 4-cycle `G` (labels B,A,A,C) and a 4-star `Q` centred on a C vertex.
/// `ged(G, Q) = 4`.
pub const CYCLE_STAR_DB: &str = "\
t # G
v 0 B
v 1 A
v 2 A
v 3 C
e 0 1 b
e 0 2 b
e 1 3 a
e 2 3 a
t # Q
v 0 A
v 1 A
v 2 A
v 3 C
e 3 0 a
e 3 1 a
e 3 2 a
";

/// A 5-vertex `G` and a 6-vertex `Q` sharing the labeled prefix `{0 -> 0, 1 -> 1}`.
pub const FIVE_SIX_DB: &str = "\
t # G
v 0 A
v 1 B
v 2 A
v 3 A
v 4 C
e 0 2 a
e 0 3 a
e 1 3 b
e 2 4 a
e 3 4 b
t # Q
v 0 A
v 1 B
v 2 A
v 3 A
v 4 B
v 5 C
e 0 2 a
e 0 3 a
e 1 4 b
e 2 5 a
e 3 5 a
e 4 5 b
";

fn pair(text: &str) -> (LabelTable, LabeledGraph, LabeledGraph) {
    let mut t = LabelTable::new();
    let mut db = parse_graph_db(text, &mut t).expect("fixture parses");
    let q = db.pop().unwrap().graph;
    let g = db.pop().unwrap().graph;
    (t, g, q)
}

pub fn cycle_star() -> (LabelTable, LabeledGraph, LabeledGraph) {
    pair(CYCLE_STAR_DB)
}

pub fn five_six() -> (LabelTable, LabeledGraph, LabeledGraph) {
    pair(FIVE_SIX_DB)
}
