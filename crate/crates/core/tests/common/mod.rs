//! Independent reference implementations for the integration tests.
//!
//! Nothing here calls into the library's algorithms; only the `Dag`
//! accessors (`len`, `parents`, `children`, `edges`, `name`) are used.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use dstar_core::engine::{ExecutionTrace, NodeColor, TraceEvent};
use dstar_core::{DSepQuery, Dag, NodeIx};

pub fn fixture(name: &str) -> Dag {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    Dag::parse(&text).expect("fixture parses")
}

pub fn ix(g: &Dag, names: &[&str]) -> Vec<NodeIx> {
    names.iter().map(|n| g.index_of(n).unwrap_or_else(|| panic!("no node {n}"))).collect()
}

pub fn case_study() -> (Dag, DSepQuery) {
    let g = fixture("case_study.dag");
    let q = DSepQuery::new(&g, &["x1", "x2"], &["y1", "y2"], &["z"]).unwrap();
    (g, q)
}

fn adjacency(g: &Dag) -> Vec<Vec<NodeIx>> {
    let mut adj = vec![Vec::new(); g.len()];
    for &(p, c) in g.edges() {
        adj[p].push(c);
        adj[c].push(p);
    }
    adj
}

/// Descendants of `v`, including `v`, by plain DFS over children.
pub fn descendants(g: &Dag, v: NodeIx) -> Vec<bool> {
    let mut seen = vec![false; g.len()];
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        if !std::mem::replace(&mut seen[u], true) {
            stack.extend_from_slice(g.children(u));
        }
    }
    seen
}

/// Ancestor sets via a transitive-closure matrix (Warshall).
pub fn ancestors_closure(g: &Dag, k: &[NodeIx]) -> BTreeSet<NodeIx> {
    let n = g.len();
    let mut reach = vec![vec![false; n]; n];
    for &(p, c) in g.edges() {
        reach[p][c] = true;
    }
    for m in 0..n {
        for i in 0..n {
            if reach[i][m] {
                let row = reach[m].clone();
                for (j, r) in row.into_iter().enumerate() {
                    if r {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n).filter(|&u| k.contains(&u) || k.iter().any(|&t| reach[u][t])).collect()
}

/// Definition-level check: every collider on `path` is in `c` or has a
/// descendant in `c`; no other interior node is in `c`.
pub fn path_is_unblocked(g: &Dag, path: &[NodeIx], c: &[NodeIx]) -> bool {
    (1..path.len().saturating_sub(1)).all(|i| {
        let (u, v, w) = (path[i - 1], path[i], path[i + 1]);
        let into = |x: NodeIx| g.parents(v).contains(&x);
        if into(u) && into(w) {
            let desc = descendants(g, v);
            c.iter().any(|&z| desc[z])
        } else {
            !c.contains(&v)
        }
    })
}

/// Every simple path in the skeleton from `s` to `t`.
pub fn simple_paths(g: &Dag, s: NodeIx, t: NodeIx) -> Vec<Vec<NodeIx>> {
    fn go(adj: &[Vec<NodeIx>], t: NodeIx, path: &mut Vec<NodeIx>, out: &mut Vec<Vec<NodeIx>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in &adj[v] {
            if !path.contains(&w) {
                path.push(w);
                go(adj, t, path, out);
                path.pop();
            }
        }
    }
    let adj = adjacency(g);
    let mut out = Vec::new();
    go(&adj, t, &mut vec![s], &mut out);
    out
}

/// d-separation by enumerating every simple path between the two sets.
pub fn brute_separated(g: &Dag, q: &DSepQuery) -> bool {
    q.a().iter().all(|&a| {
        q.b().iter().all(|&b| simple_paths(g, a, b).iter().all(|p| !path_is_unblocked(g, p, q.c())))
    })
}

/// Shortest unblocked path by exhaustive enumeration.
pub fn brute_shortest_unblocked(g: &Dag, s: NodeIx, t: NodeIx, c: &[NodeIx]) -> Option<usize> {
    simple_paths(g, s, t).into_iter().filter(|p| path_is_unblocked(g, p, c)).map(|p| p.len() - 1).min()
}

/// Longest directed path by enumerating every directed path.
pub fn brute_longest_directed(g: &Dag) -> usize {
    fn go(g: &Dag, v: NodeIx) -> usize {
        g.children(v).iter().map(|&c| 1 + go(g, c)).max().unwrap_or(0)
    }
    (0..g.len()).map(|v| go(g, v)).max().unwrap_or(0)
}

/// Longest simple undirected path by subset dynamic programming over
/// node orderings: `dp[mask][v]` says some ordering of `mask` is a path
/// ending in `v`.
pub fn subset_longest_undirected(g: &Dag) -> usize {
    let n = g.len();
    assert!(n <= 16, "subset DP is for small graphs");
    let adj = adjacency(g);
    let mut dp = vec![vec![false; n]; 1 << n];
    let mut best = 0;
    for v in 0..n {
        dp[1 << v][v] = true;
    }
    for mask in 1usize..(1 << n) {
        for v in 0..n {
            if !dp[mask][v] {
                continue;
            }
            best = best.max(mask.count_ones() as usize - 1);
            for &w in &adj[v] {
                if mask & (1 << w) == 0 {
                    dp[mask | (1 << w)][w] = true;
                }
            }
        }
    }
    best
}

/// Diameter from Floyd-Warshall on the skeleton, ignoring unreachable pairs.
pub fn floyd_diameter(g: &Dag) -> usize {
    let n = g.len();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(p, c) in g.edges() {
        d[p][c] = 1;
        d[c][p] = 1;
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][m] + d[m][j] < d[i][j] {
                    d[i][j] = d[i][m] + d[m][j];
                }
            }
        }
    }
    d.iter().flatten().copied().filter(|&x| x < inf).max().unwrap_or(0)
}

fn connected(nodes: &BTreeSet<NodeIx>, edges: &[(NodeIx, NodeIx)]) -> bool {
    let Some(&start) = nodes.iter().next() else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &(p, c) in edges {
            let w = if p == v {
                c
            } else if c == v {
                p
            } else {
                continue;
            };
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == nodes.len()
}

fn directed_path_within(edges: &[(NodeIx, NodeIx)], from: NodeIx, targets: &[NodeIx]) -> bool {
    let mut seen = BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if targets.contains(&v) {
            return true;
        }
        for &(p, c) in edges {
            if p == v && seen.insert(c) {
                stack.push(c);
            }
        }
    }
    false
}

/// Whether an edge set satisfies the definition of a refutation module:
/// connected, containing an `A`-`B` path that is unblocked in `g`, whose
/// colliders each reach `C` along directed edges of the set.
pub fn is_refutation_module(g: &Dag, q: &DSepQuery, edges: &[(NodeIx, NodeIx)]) -> bool {
    let nodes: BTreeSet<NodeIx> = edges.iter().flat_map(|&(p, c)| [p, c]).collect();
    if !connected(&nodes, edges) {
        return false;
    }
    let names: Vec<String> = nodes.iter().map(|&v| g.name(v).to_string()).collect();
    let sub_edges: Vec<(&str, &str)> = edges.iter().map(|&(p, c)| (g.name(p), g.name(c))).collect();
    let sub =
        Dag::new(names.iter().map(String::as_str), sub_edges.iter().copied()).expect("subgraph of a DAG");
    let to_g = |v: NodeIx| g.index_of(sub.name(v)).unwrap();
    let to_sub = |v: NodeIx| sub.index_of(g.name(v));
    for &a in q.a() {
        for &b in q.b() {
            let (Some(sa), Some(sb)) = (to_sub(a), to_sub(b)) else { continue };
            for p in simple_paths(&sub, sa, sb) {
                let p: Vec<NodeIx> = p.into_iter().map(to_g).collect();
                if !path_is_unblocked(g, &p, q.c()) {
                    continue;
                }
                let linked = (1..p.len() - 1).all(|i| {
                    let v = p[i];
                    let collider = g.parents(v).contains(&p[i - 1]) && g.parents(v).contains(&p[i + 1]);
                    !collider || directed_path_within(edges, v, q.c())
                });
                if linked {
                    return true;
                }
            }
        }
    }
    false
}

/// Fewest edges over all edge subsets of `g` forming a refutation module.
pub fn brute_min_module_size(g: &Dag, q: &DSepQuery) -> Option<usize> {
    let all = g.edges().to_vec();
    let m = all.len();
    for k in 1..=m {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let subset: Vec<(NodeIx, NodeIx)> = idx.iter().map(|&i| all[i]).collect();
            if is_refutation_module(g, q, &subset) {
                return Some(k);
            }
            // Next k-combination in lexicographic order.
            let mut i = k;
            while i > 0 && idx[i - 1] == m - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

/// Colors at time `t` obtained by replaying color-change events.
pub fn replay_colors(trace: &ExecutionTrace, t: f64) -> Vec<NodeColor> {
    let mut colors = vec![NodeColor::None; trace.node_names.len()];
    for ev in &trace.events {
        if ev.time() > t {
            break;
        }
        if let TraceEvent::ColorChange { node, to, .. } = *ev {
            colors[node] = to;
        }
    }
    colors
}

/// Per directed channel, delivered payloads form a prefix of the sent
/// payloads, in order.
pub fn fifo_holds(trace: &ExecutionTrace) -> bool {
    use std::collections::BTreeMap;
    let mut sent: BTreeMap<(NodeIx, NodeIx), Vec<_>> = BTreeMap::new();
    let mut delivered: BTreeMap<(NodeIx, NodeIx), Vec<_>> = BTreeMap::new();
    for ev in &trace.events {
        match *ev {
            TraceEvent::Send { msg, .. } => sent.entry((msg.src, msg.dst)).or_default().push(msg.payload),
            TraceEvent::Deliver { msg, .. } => {
                delivered.entry((msg.src, msg.dst)).or_default().push(msg.payload)
            }
            _ => {}
        }
    }
    delivered.iter().all(|(k, d)| sent.get(k).is_some_and(|s| s.starts_with(d)))
}
