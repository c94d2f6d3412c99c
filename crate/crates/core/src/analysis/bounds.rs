use serde::Serialize;

use super::modules::{enumerate_refutation_modules, DEFAULT_MODULE_CAP};
use crate::engine::{ExecutionTrace, SimulationParams, Verdict};
use crate::error::AnalysisError;
use crate::graph::metrics::ancestral_graph_with_map;
use crate::graph::{longest_directed_path, shortest_unblocked_path, DSepQuery, Dag, NodeIx};

/// Relative slack when comparing a float time with an analytic bound.
const REL_TOL: f64 = 1e-9;

/// Measured clash time against the two analytic upper bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub measured_clash_time: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Longest directed path in the ancestral graph of A ∪ B ∪ C.
    pub l_an_d: usize,
    /// Shortest unblocked path over all `(a, b)` pairs.
    pub min_l_ij: usize,
    /// `(alpha + beta) * (l_an_d + min_l_ij)`.
    pub path_bound: f64,
    /// `(alpha + beta) * min(l_d + p_len)` over refutation modules.
    pub module_bound: f64,
    pub minimal_module_edges: usize,
    pub path_bound_satisfied: bool,
    pub module_bound_satisfied: bool,
    /// `module_bound <= path_bound`.
    pub module_le_path: bool,
}

impl BoundReport {
    pub fn all_satisfied(&self) -> bool {
        self.path_bound_satisfied && self.module_bound_satisfied && self.module_le_path
    }
}

fn within(x: f64, bound: f64) -> bool {
    x <= bound + REL_TOL * bound.abs().max(1.0)
}

pub fn check_bounds(
    g: &Dag,
    q: &DSepQuery,
    trace: &ExecutionTrace,
    params: &SimulationParams,
) -> Result<BoundReport, AnalysisError> {
    check_bounds_with_cap(g, q, trace, params, DEFAULT_MODULE_CAP)
}

pub fn check_bounds_with_cap(
    g: &Dag,
    q: &DSepQuery,
    trace: &ExecutionTrace,
    params: &SimulationParams,
    max_nodes: usize,
) -> Result<BoundReport, AnalysisError> {
    let Verdict::Dependent { time, .. } = trace.verdict else {
        return Err(AnalysisError::IndependentTrace);
    };
    let (an, map) = ancestral_graph_with_map(g, &q.all());
    let to_an = |v: NodeIx| map[v].expect("query nodes belong to their ancestral graph");
    let c_an: Vec<NodeIx> = q.c().iter().map(|&v| to_an(v)).collect();
    let l_an_d = longest_directed_path(&an);
    let min_l_ij = q
        .a()
        .iter()
        .flat_map(|&a| q.b().iter().map(move |&b| (a, b)))
        .filter_map(|(a, b)| shortest_unblocked_path(&an, to_an(a), to_an(b), &c_an))
        .min()
        .ok_or(AnalysisError::Separated)?;

    let modules = enumerate_refutation_modules(g, q, max_nodes)?;
    let best = modules.iter().map(|m| m.l_d + m.p_len).min().expect("non-empty module list");
    let minimal_module_edges = modules.iter().map(|m| m.edges.len()).min().expect("non-empty module list");

    let hop = params.alpha + params.beta;
    let path_bound = hop * (l_an_d + min_l_ij) as f64;
    let module_bound = hop * best as f64;
    Ok(BoundReport {
        measured_clash_time: time,
        alpha: params.alpha,
        beta: params.beta,
        l_an_d,
        min_l_ij,
        path_bound,
        module_bound,
        minimal_module_edges,
        path_bound_satisfied: within(time, path_bound),
        module_bound_satisfied: within(time, module_bound),
        module_le_path: within(module_bound, path_bound),
    })
}
