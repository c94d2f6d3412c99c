//! Sequential d-separation deciders used as ground truth for the
//! message-passing engine.
//!
//! [`d_separated_reach`] walks the active-trail state graph from `A`;
//! [`d_separated_moral`] tests for a vertex cut in the moralized ancestral
//! graph. The two share no code beyond the graph type.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::metrics::{trail_successors, Arrival};
use crate::graph::{ancestral_graph, DSepQuery, Dag, NodeIx};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub separated: bool,
    /// An unblocked path from some `a ∈ A` to some `b ∈ B` when not separated.
    pub witness_path: Option<Vec<NodeIx>>,
}

/// Active-trail reachability from `A`, linear in the number of edges.
///
/// The returned witness is a shortest unblocked path.
pub fn d_separated_reach(g: &Dag, q: &DSepQuery) -> OracleResult {
    let observed = q.c_mask(g.len());
    let active = g.has_descendant_in(q.c());
    let mut is_target = vec![false; g.len()];
    q.b().iter().for_each(|&b| is_target[b] = true);

    let mut prev: Vec<Option<usize>> = vec![None; 2 * g.len()];
    let mut seen = vec![false; 2 * g.len()];
    let mut queue = VecDeque::new();
    // A is disjoint from C, so the ordinary "arrived from a child" expansion
    // opens a start node in both directions.
    for &a in q.a() {
        seen[Arrival::FromChild.slot(a)] = true;
        queue.push_back((a, Arrival::FromChild));
    }
    while let Some((v, arr)) = queue.pop_front() {
        let here = arr.slot(v);
        let mut hit = None;
        trail_successors(g, v, arr, &observed, &active, |w, a| {
            let slot = a.slot(w);
            if !seen[slot] {
                seen[slot] = true;
                prev[slot] = Some(here);
                if is_target[w] && hit.is_none() {
                    hit = Some(slot);
                }
                queue.push_back((w, a));
            }
        });
        if let Some(mut slot) = hit {
            let mut path = vec![slot / 2];
            while let Some(p) = prev[slot] {
                path.push(p / 2);
                slot = p;
            }
            path.reverse();
            return OracleResult { separated: false, witness_path: Some(path) };
        }
    }
    OracleResult { separated: true, witness_path: None }
}

/// Vertex-cut test in the moralized ancestral graph of `A ∪ B ∪ C`.
pub fn d_separated_moral(g: &Dag, q: &DSepQuery) -> OracleResult {
    let an = ancestral_graph(g, &q.all());
    let to_an = |v: NodeIx| an.index_of(g.name(v)).expect("query node in its ancestral graph");

    let n = an.len();
    let mut adj = vec![vec![false; n]; n];
    for &(p, c) in an.edges() {
        adj[p][c] = true;
        adj[c][p] = true;
    }
    for v in 0..n {
        let ps = an.parents(v);
        for (i, &p) in ps.iter().enumerate() {
            for &r in &ps[i + 1..] {
                adj[p][r] = true;
                adj[r][p] = true;
            }
        }
    }

    let mut blocked = vec![false; n];
    q.c().iter().for_each(|&c| blocked[to_an(c)] = true);
    let mut target = vec![false; n];
    q.b().iter().for_each(|&b| target[to_an(b)] = true);
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = q.a().iter().map(|&a| to_an(a)).collect();
    queue.iter().for_each(|&a| seen[a] = true);
    while let Some(v) = queue.pop_front() {
        if target[v] {
            return OracleResult { separated: false, witness_path: None };
        }
        for w in 0..n {
            if adj[v][w] && !seen[w] && !blocked[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    OracleResult { separated: true, witness_path: None }
}

/// Deterministic half of the certificate-checking procedure for a dependence
/// claim: `module_edges` must be edges of `g`, `x ∈ A`, `y ∈ B`,
/// `z_subset ⊆ C`, and `x` and `y` must be d-connected given `z_subset`
/// inside the subgraph spanned by `module_edges`.
///
/// Malformed certificates yield `false`.
pub fn verify_certificate(
    g: &Dag,
    q: &DSepQuery,
    module_edges: &[(NodeIx, NodeIx)],
    x: NodeIx,
    y: NodeIx,
    z_subset: &[NodeIx],
) -> bool {
    if !q.a().contains(&x) || !q.b().contains(&y) || !z_subset.iter().all(|z| q.c().contains(z)) {
        return false;
    }
    let Some((sub, map)) = g.edge_subgraph(module_edges) else {
        return false;
    };
    let (Some(sx), Some(sy)) = (map[x], map[y]) else {
        return false;
    };
    let sz: Vec<NodeIx> = z_subset.iter().filter_map(|&z| map[z]).collect();
    let Ok(sq) = DSepQuery::from_indices(&sub, [sx], [sy], sz) else {
        return false;
    };
    !d_separated_reach(&sub, &sq).separated
}

/// Checks a node sequence against the definition of an unblocked path:
/// consecutive nodes adjacent, no repeats, every collider observed or with
/// an observed descendant, every other interior node unobserved.
pub fn is_unblocked_path(g: &Dag, path: &[NodeIx], c_set: &[NodeIx]) -> bool {
    if path.len() < 2 || path.iter().any(|&v| v >= g.len()) {
        return false;
    }
    let mut seen = vec![false; g.len()];
    for &v in path {
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    if path.windows(2).any(|w| !g.adjacent(w[0], w[1])) {
        return false;
    }
    path.windows(3).all(|w| {
        let (prev, v, next) = (w[0], w[1], w[2]);
        let collider = g.has_edge(prev, v) && g.has_edge(next, v);
        if collider {
            c_set.contains(&v) || has_observed_descendant(g, v, c_set)
        } else {
            !c_set.contains(&v)
        }
    })
}

fn has_observed_descendant(g: &Dag, v: NodeIx, c_set: &[NodeIx]) -> bool {
    let mut stack = g.children(v).to_vec();
    let mut seen = vec![false; g.len()];
    while let Some(w) = stack.pop() {
        if std::mem::replace(&mut seen[w], true) {
            continue;
        }
        if c_set.contains(&w) {
            return true;
        }
        stack.extend_from_slice(g.children(w));
    }
    false
}
