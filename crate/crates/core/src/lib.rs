//! Distributed, asynchronous d-separation by three-color message passing.
//!
//! Every node of a DAG acts as a process that exchanges 2-bit color messages
//! with its neighbors. Nodes in `A` start green, `B` red and `C` white; a
//! green/red clash anywhere means `A` and `B` are dependent given `C`, and
//! quiescence without a clash means they are d-separated.
//!
//! The crate provides:
//! - [`graph`]: the DAG model, file format, ancestral graphs and path metrics.
//! - [`engine`]: the node state machine, a seed-deterministic discrete-event
//!   simulator, a thread-per-node runner, traces, snapshots and DOT export.
//! - [`oracles`]: two independent sequential d-separation deciders.
//! - [`analysis`]: refutation modules, clash-time bounds, message accounting
//!   and the expected-runtime cost model.
//! - [`generate`]: random and exhaustive DAG/query generators.

pub mod analysis;
pub mod engine;
mod error;
pub mod generate;
pub mod graph;
pub mod oracles;

pub use error::{AnalysisError, EngineError, GraphError, QueryError, TraceError};
pub use graph::{DSepQuery, Dag, NodeIx};
