//! Random and exhaustive instance generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{DSepQuery, Dag, NodeIx};

/// Zero-padded names so that lexicographic order is numeric order.
pub fn node_names(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len().max(2);
    (0..n).map(|i| format!("v{i:0width$}")).collect()
}

/// Random DAG: a random topological order, then every forward pair becomes
/// an edge with probability `p`.
pub fn random_dag<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Dag {
    let mut order: Vec<NodeIx> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Dag::from_indexed(node_names(n), &edges).expect("forward edges are acyclic")
}

/// Like [`random_dag`], but every node after the first in the order also
/// gets one parent chosen among its predecessors, so the skeleton is
/// connected.
pub fn random_connected_dag<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Dag {
    let mut order: Vec<NodeIx> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for j in 1..n {
        let anchor = rng.gen_range(0..j);
        for i in 0..j {
            if i == anchor || rng.gen_bool(p) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Dag::from_indexed(node_names(n), &edges).expect("forward edges are acyclic")
}

/// Disjoint random sets of the requested sizes, or `None` if the graph is too
/// small.
pub fn random_query<R: Rng + ?Sized>(
    g: &Dag,
    a_len: usize,
    b_len: usize,
    c_len: usize,
    rng: &mut R,
) -> Option<DSepQuery> {
    if a_len == 0 || b_len == 0 || a_len + b_len + c_len > g.len() {
        return None;
    }
    let mut nodes: Vec<NodeIx> = (0..g.len()).collect();
    nodes.shuffle(rng);
    let (a, rest) = nodes.split_at(a_len);
    let (b, rest) = rest.split_at(b_len);
    let c = &rest[..c_len];
    DSepQuery::from_indices(g, a.iter().copied(), b.iter().copied(), c.iter().copied()).ok()
}

/// Every DAG on `n` labeled nodes (25 for n = 3, 543 for n = 4).
pub fn all_labeled_dags(n: usize) -> Vec<Dag> {
    let pairs: Vec<(NodeIx, NodeIx)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    let names = node_names(n);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(i, j) in &pairs {
            match code % 3 {
                1 => edges.push((i, j)),
                2 => edges.push((j, i)),
                _ => {}
            }
            code /= 3;
        }
        if let Ok(g) = Dag::from_indexed(names.clone(), &edges) {
            out.push(g);
        }
    }
    out
}

/// All queries with singleton `A` and `B` and `|C| <= max_c`, for ordered
/// pairs `(a, b)`.
pub fn singleton_queries(g: &Dag, max_c: usize) -> Vec<DSepQuery> {
    let n = g.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let rest: Vec<NodeIx> = (0..n).filter(|&v| v != a && v != b).collect();
            for mask in 0u32..(1 << rest.len()) {
                if mask.count_ones() as usize > max_c {
                    continue;
                }
                let c = rest.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v);
                out.push(DSepQuery::from_indices(g, [a], [b], c).expect("disjoint by construction"));
            }
        }
    }
    out
}
