//! Exact graph edit distance under uniform costs.

pub mod bounds;
pub mod bss;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod mapping;
pub mod oracle;
pub mod parse;
pub mod partition;
pub mod simsearch;
pub mod space;

pub use bss::{bss_ged, BssConfig, GedResult, Outcome, SearchStats};
pub use error::{EditPathError, GenError, GraphError, OracleError, ParseError, ParseErrorKind};
pub use graph::{Edge, Label, LabelTable, LabeledGraph, DUMMY_LABEL};
pub use mapping::{edit_cost, realize_edit_path, EditCostBreakdown, EditOp, ExtVertex, GraphMapping};
pub use parse::{parse_graph_db, write_graph_db, GraphRecord};
pub use partition::VertexPartition;
pub use simsearch::{range_query, verify_within, GraphDatabase, QueryResult, Verdict};
pub use space::{OrderPolicy, SuccessorPolicy};
