//! Graph data model: the DAG, queries over it, and path metrics.

mod dag;
pub mod metrics;
mod query;

pub use dag::{Dag, NodeIx};
pub use metrics::{
    ancestral_graph, diameter, longest_directed_path, longest_undirected_path, path_metrics,
    shortest_unblocked_path, PathMetrics, DEFAULT_UNDIRECTED_CAP,
};
pub use query::DSepQuery;
