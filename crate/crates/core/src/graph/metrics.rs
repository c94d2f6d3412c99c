//! Path quantities that feed the clash-time and message-complexity bounds.
//!
//! All lengths count edges. Unreachable or fully blocked pairs are `None`.

use std::collections::VecDeque;

use serde::Serialize;

use super::{DSepQuery, Dag, NodeIx};
use crate::error::GraphError;

/// Default node cap for the exhaustive longest-undirected-path search.
pub const DEFAULT_UNDIRECTED_CAP: usize = 25;

/// Induced subgraph on `k` and all ancestors of `k`.
pub fn ancestral_graph(g: &Dag, k: &[NodeIx]) -> Dag {
    ancestral_graph_with_map(g, k).0
}

/// Like [`ancestral_graph`], also returning the old-to-new index map.
pub fn ancestral_graph_with_map(g: &Dag, k: &[NodeIx]) -> (Dag, Vec<Option<NodeIx>>) {
    g.induced(&g.ancestor_mask(k))
}

/// Longest directed path, by dynamic programming over a topological order.
pub fn longest_directed_path(g: &Dag) -> usize {
    let mut depth = vec![0usize; g.len()];
    for v in g.topological_order() {
        for &c in g.children(v) {
            depth[c] = depth[c].max(depth[v] + 1);
        }
    }
    depth.into_iter().max().unwrap_or(0)
}

/// Longest simple path in the undirected skeleton, by exhaustive search.
///
/// Exponential in the worst case, so graphs above `cap` nodes are refused.
pub fn longest_undirected_path(g: &Dag, cap: usize) -> Result<usize, GraphError> {
    if g.len() > cap {
        return Err(GraphError::TooLarge { nodes: g.len(), cap });
    }
    let adj: Vec<Vec<NodeIx>> = (0..g.len()).map(|v| g.neighbors(v)).collect();
    let ceiling = g.len().saturating_sub(1).min(g.edge_count());
    let mut best = 0;
    let mut on_path = vec![false; g.len()];
    for start in 0..g.len() {
        if best == ceiling {
            break;
        }
        extend_undirected(&adj, start, 0, &mut on_path, &mut best, ceiling);
    }
    Ok(best)
}

fn extend_undirected(
    adj: &[Vec<NodeIx>],
    v: NodeIx,
    len: usize,
    on_path: &mut [bool],
    best: &mut usize,
    ceiling: usize,
) {
    *best = (*best).max(len);
    if *best == ceiling {
        return;
    }
    on_path[v] = true;
    for &w in &adj[v] {
        if !on_path[w] {
            extend_undirected(adj, w, len + 1, on_path, best, ceiling);
        }
    }
    on_path[v] = false;
}

/// Direction in which a trail entered a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Arrival {
    /// Came up from a child (the node is the tail of the traversed edge).
    FromChild,
    /// Came down from a parent (the node is the head of the traversed edge).
    FromParent,
}

impl Arrival {
    pub(crate) fn slot(self, v: NodeIx) -> usize {
        2 * v + self as usize
    }
}

/// Successor states of the active-trail state graph.
///
/// `active_collider[v]` holds when `v` or one of its descendants is observed.
pub(crate) fn trail_successors(
    g: &Dag,
    v: NodeIx,
    arrival: Arrival,
    observed: &[bool],
    active_collider: &[bool],
    mut visit: impl FnMut(NodeIx, Arrival),
) {
    let pass_through = !observed[v];
    match arrival {
        Arrival::FromChild => {
            if pass_through {
                g.parents(v).iter().for_each(|&p| visit(p, Arrival::FromChild));
                g.children(v).iter().for_each(|&c| visit(c, Arrival::FromParent));
            }
        }
        Arrival::FromParent => {
            if pass_through {
                g.children(v).iter().for_each(|&c| visit(c, Arrival::FromParent));
            }
            if active_collider[v] {
                g.parents(v).iter().for_each(|&p| visit(p, Arrival::FromChild));
            }
        }
    }
}

/// Length of the shortest path from `src` to `dst` that is unblocked given
/// `c_set`, or `None` when every path is blocked.
///
/// Breadth-first search over `(node, arrival direction)` states. A shortest
/// active trail never repeats a node, so the trail length is a path length.
pub fn shortest_unblocked_path(g: &Dag, src: NodeIx, dst: NodeIx, c_set: &[NodeIx]) -> Option<usize> {
    debug_assert_ne!(src, dst);
    let mut observed = vec![false; g.len()];
    for &c in c_set {
        observed[c] = true;
    }
    let active = g.has_descendant_in(c_set);
    let mut dist = vec![usize::MAX; 2 * g.len()];
    let mut queue = VecDeque::new();
    // The source is an endpoint, never blocked: expand it in both directions.
    dist[Arrival::FromChild.slot(src)] = 0;
    queue.push_back((src, Arrival::FromChild));
    let mut seed_children = true;
    while let Some((v, arr)) = queue.pop_front() {
        let d = dist[arr.slot(v)];
        let mut found = None;
        let mut step = |w: NodeIx, a: Arrival| {
            if dist[a.slot(w)] == usize::MAX {
                dist[a.slot(w)] = d + 1;
                if w == dst {
                    found = Some(d + 1);
                }
                queue.push_back((w, a));
            }
        };
        if v == src && seed_children {
            seed_children = false;
            g.parents(v).iter().for_each(|&p| step(p, Arrival::FromChild));
            g.children(v).iter().for_each(|&c| step(c, Arrival::FromParent));
        } else if v != dst {
            trail_successors(g, v, arr, &observed, &active, &mut step);
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Largest finite shortest-path distance in the undirected skeleton
/// (the per-component maximum when the skeleton is disconnected).
pub fn diameter(g: &Dag) -> usize {
    let adj: Vec<Vec<NodeIx>> = (0..g.len()).map(|v| g.neighbors(v)).collect();
    let mut best = 0;
    let mut dist = vec![usize::MAX; g.len()];
    for s in 0..g.len() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            best = best.max(dist[v]);
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    best
}

/// Complexity quantities of a query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathMetrics {
    /// Longest undirected path in the ancestral graph of A ∪ B ∪ C.
    pub l_an: usize,
    /// Longest directed path in the ancestral graph.
    pub l_an_d: usize,
    /// Shortest unblocked path per `(a_i, b_j)`, rows in A order, columns in B order.
    pub l_ij: Vec<Vec<Option<usize>>>,
    /// Diameter of the whole graph.
    pub diameter: usize,
    /// Edge count of the ancestral graph.
    pub e_an: usize,
}

impl PathMetrics {
    pub fn min_l_ij(&self) -> Option<usize> {
        self.l_ij.iter().flatten().flatten().copied().min()
    }
}

pub fn path_metrics(g: &Dag, q: &DSepQuery, undirected_cap: usize) -> Result<PathMetrics, GraphError> {
    let (an, map) = ancestral_graph_with_map(g, &q.all());
    let to_an = |v: NodeIx| map[v].expect("query nodes belong to their ancestral graph");
    let c_an: Vec<NodeIx> = q.c().iter().map(|&v| to_an(v)).collect();
    let l_ij = q
        .a()
        .iter()
        .map(|&a| q.b().iter().map(|&b| shortest_unblocked_path(&an, to_an(a), to_an(b), &c_an)).collect())
        .collect();
    Ok(PathMetrics {
        l_an: longest_undirected_path(&an, undirected_cap)?,
        l_an_d: longest_directed_path(&an),
        l_ij,
        diameter: diameter(g),
        e_an: an.edge_count(),
    })
}
