use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("cycle detected: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    #[error("self-loop on {0}")]
    SelfLoop(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("line {line}: edge references undeclared node {node}")]
    UnknownNodeAt { line: usize, node: String },
    #[error("graph has {nodes} nodes, above the exhaustive-search cap of {cap}")]
    TooLarge { nodes: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("set {0} must not be empty")]
    EmptySet(char),
    #[error("node {0} appears in more than one of A, B, C")]
    Overlap(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("alpha and beta must be positive and finite (alpha={alpha}, beta={beta})")]
    InvalidParams { alpha: f64, beta: f64 },
    #[error("centralized source {0} is not a node of the graph")]
    UnknownSource(String),
    #[error("skeleton is disconnected: {0} is unreachable from the source")]
    Disconnected(String),
    #[error("{0}")]
    Unsupported(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("time {t} lies outside the trace span [0, {end}]")]
    OutOfRange { t: String, end: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("query is a d-separation (independent); no refutation module exists")]
    Separated,
    #[error("trace verdict is independent; clash-time bounds do not apply")]
    IndependentTrace,
    #[error("invalid cost model: {0}")]
    InvalidCostModel(&'static str),
}
