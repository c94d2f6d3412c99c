use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{AnalysisError, GraphError};
use crate::graph::{longest_directed_path, shortest_unblocked_path, DSepQuery, Dag, NodeIx};
use crate::oracles::{d_separated_reach, verify_certificate};

pub const DEFAULT_MODULE_CAP: usize = 16;

/// A connected subgraph certifying that `A` and `B` are d-connected given
/// `C`: an unblocked path plus a directed link from each of its colliders to
/// a conditioning node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationModule {
    /// Sorted, duplicate-free.
    pub edges: Vec<(NodeIx, NodeIx)>,
    pub active_path: Vec<NodeIx>,
    /// One directed path per collider of `active_path`, in path order, from
    /// the collider to a node of `C`. A collider in `C` has the one-node link.
    pub collider_links: Vec<Vec<NodeIx>>,
    /// Longest directed path inside the module.
    pub l_d: usize,
    /// Shortest unblocked `A`-`B` path inside the module.
    pub p_len: usize,
}

/// All modules of the form "unblocked path plus one directed link per
/// collider", deduplicated by edge set and sorted by it.
///
/// Paths whose interior touches `A ∪ B` are skipped: a sub-path between the
/// last `A` node and the next `B` node gives a module with fewer edges.
pub fn enumerate_refutation_modules(
    g: &Dag,
    q: &DSepQuery,
    max_nodes: usize,
) -> Result<Vec<RefutationModule>, AnalysisError> {
    DSepQuery::from_indices(g, q.a().iter().copied(), q.b().iter().copied(), q.c().iter().copied())?;
    if g.len() > max_nodes {
        return Err(GraphError::TooLarge { nodes: g.len(), cap: max_nodes }.into());
    }
    if d_separated_reach(g, q).separated {
        return Err(AnalysisError::Separated);
    }

    let ctx = Ctx::new(g, q);
    let mut paths = Vec::new();
    for &a in q.a() {
        let mut path = vec![a];
        let mut on_path = vec![false; g.len()];
        on_path[a] = true;
        ctx.extend_paths(&mut path, &mut on_path, &mut paths);
    }

    let mut by_edges: BTreeMap<Vec<(NodeIx, NodeIx)>, RefutationModule> = BTreeMap::new();
    for path in paths {
        let colliders: Vec<NodeIx> = (1..path.len() - 1)
            .filter(|&i| g.has_edge(path[i - 1], path[i]) && g.has_edge(path[i + 1], path[i]))
            .map(|i| path[i])
            .collect();
        let options: Vec<Vec<Vec<NodeIx>>> = colliders.iter().map(|&v| ctx.links_from(v)).collect();
        let mut choice = vec![0usize; options.len()];
        loop {
            let links: Vec<Vec<NodeIx>> =
                choice.iter().zip(&options).map(|(&i, opts)| opts[i].clone()).collect();
            let edges = module_edges(g, &path, &links);
            if let Entry::Vacant(slot) = by_edges.entry(edges) {
                let m = ctx.build(path.clone(), links, slot.key().clone());
                slot.insert(m);
            }
            // Odometer over the per-collider link choices.
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    Ok(by_edges.into_values().collect())
}

/// The module with the fewest edges; ties go to the lexicographically
/// smallest sorted edge list.
pub fn minimal_refutation_module(
    g: &Dag,
    q: &DSepQuery,
    max_nodes: usize,
) -> Result<RefutationModule, AnalysisError> {
    let modules = enumerate_refutation_modules(g, q, max_nodes)?;
    Ok(modules
        .into_iter()
        .min_by(|x, y| x.edges.len().cmp(&y.edges.len()).then_with(|| x.edges.cmp(&y.edges)))
        .expect("a d-connected query has at least one module"))
}

fn module_edges(g: &Dag, path: &[NodeIx], links: &[Vec<NodeIx>]) -> Vec<(NodeIx, NodeIx)> {
    let mut edges: Vec<(NodeIx, NodeIx)> = path
        .windows(2)
        .map(|w| if g.has_edge(w[0], w[1]) { (w[0], w[1]) } else { (w[1], w[0]) })
        .chain(links.iter().flat_map(|l| l.windows(2).map(|w| (w[0], w[1]))))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

struct Ctx<'g> {
    g: &'g Dag,
    q: &'g DSepQuery,
    in_c: Vec<bool>,
    endpoint: Vec<bool>,
    is_b: Vec<bool>,
    active: Vec<bool>,
}

impl<'g> Ctx<'g> {
    fn new(g: &'g Dag, q: &'g DSepQuery) -> Self {
        let in_c = q.c_mask(g.len());
        let mut endpoint = vec![false; g.len()];
        let mut is_b = vec![false; g.len()];
        q.a().iter().for_each(|&v| endpoint[v] = true);
        for &v in q.b() {
            endpoint[v] = true;
            is_b[v] = true;
        }
        Ctx { g, q, in_c, endpoint, is_b, active: g.has_descendant_in(q.c()) }
    }

    /// Depth-first extension of an unblocked simple path ending at the last
    /// node of `path`; complete paths end at the first `B` node reached.
    fn extend_paths(&self, path: &mut Vec<NodeIx>, on_path: &mut [bool], out: &mut Vec<Vec<NodeIx>>) {
        let v = *path.last().expect("non-empty path");
        let prev = path.len().checked_sub(2).map(|i| path[i]);
        for w in self.g.neighbors(v) {
            if on_path[w] {
                continue;
            }
            if let Some(u) = prev {
                // v becomes an interior node between u and w.
                let collider = self.g.has_edge(u, v) && self.g.has_edge(w, v);
                let open = if collider { self.active[v] } else { !self.in_c[v] };
                if !open {
                    continue;
                }
            }
            if self.is_b[w] {
                path.push(w);
                out.push(path.clone());
                path.pop();
            } else if !self.endpoint[w] {
                path.push(w);
                on_path[w] = true;
                self.extend_paths(path, on_path, out);
                on_path[w] = false;
                path.pop();
            }
        }
    }

    /// Directed paths from `v` that stop at the first node of `C`.
    fn links_from(&self, v: NodeIx) -> Vec<Vec<NodeIx>> {
        let mut out = Vec::new();
        let mut path = vec![v];
        self.extend_links(&mut path, &mut out);
        out
    }

    fn extend_links(&self, path: &mut Vec<NodeIx>, out: &mut Vec<Vec<NodeIx>>) {
        let v = *path.last().expect("non-empty link");
        if self.in_c[v] {
            out.push(path.clone());
            return;
        }
        for &c in self.g.children(v) {
            if self.active[c] {
                path.push(c);
                self.extend_links(path, out);
                path.pop();
            }
        }
    }

    fn build(
        &self,
        path: Vec<NodeIx>,
        links: Vec<Vec<NodeIx>>,
        edges: Vec<(NodeIx, NodeIx)>,
    ) -> RefutationModule {
        let (sub, map) = self.g.edge_subgraph(&edges).expect("module edges come from the graph");
        let c_sub: Vec<NodeIx> = self.q.c().iter().filter_map(|&v| map[v]).collect();
        let (a_sub, b_sub): (Vec<NodeIx>, Vec<NodeIx>) = (
            self.q.a().iter().filter_map(|&v| map[v]).collect(),
            self.q.b().iter().filter_map(|&v| map[v]).collect(),
        );
        let (sub_ref, c_ref) = (&sub, &c_sub);
        let p_len = a_sub
            .iter()
            .flat_map(|&a| b_sub.iter().filter_map(move |&b| shortest_unblocked_path(sub_ref, a, b, c_ref)))
            .min()
            .expect("the active path survives inside its module");
        let z: Vec<NodeIx> = self.q.c().iter().copied().filter(|&v| map[v].is_some()).collect();
        debug_assert!(verify_certificate(self.g, self.q, &edges, path[0], *path.last().unwrap(), &z));
        RefutationModule {
            l_d: longest_directed_path(&sub),
            p_len,
            edges,
            active_path: path,
            collider_links: links,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(text: &str, a: &str, b: &str, c: &[&str]) -> (Dag, DSepQuery) {
        let g = Dag::parse(text).unwrap();
        let q = DSepQuery::new(&g, &[a], &[b], c).unwrap();
        (g, q)
    }

    #[test]
    fn observed_collider_has_one_module() {
        let (g, q) = setup("edge a v\nedge b v", "a", "b", &["v"]);
        let ms = enumerate_refutation_modules(&g, &q, DEFAULT_MODULE_CAP).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].edges.len(), 2);
        assert_eq!((ms[0].l_d, ms[0].p_len), (1, 2));
    }

    #[test]
    fn collider_link_is_part_of_the_module() {
        let (g, q) = setup("edge a v\nedge b v\nedge v d", "a", "b", &["d"]);
        let m = minimal_refutation_module(&g, &q, DEFAULT_MODULE_CAP).unwrap();
        let name = |e: &(NodeIx, NodeIx)| format!("{}{}", g.name(e.0), g.name(e.1));
        let names: Vec<String> = m.edges.iter().map(name).collect();
        assert_eq!(names, ["av", "bv", "vd"]);
        assert_eq!(m.collider_links.len(), 1);
        assert_eq!(m.l_d, 2);
    }

    #[test]
    fn separated_query_has_no_module() {
        let (g, q) = setup("edge a v\nedge b v", "a", "b", &[]);
        assert_eq!(enumerate_refutation_modules(&g, &q, DEFAULT_MODULE_CAP), Err(AnalysisError::Separated));
    }

    #[test]
    fn cap_is_enforced() {
        let (g, q) = setup("edge a b\nedge b c", "a", "c", &[]);
        assert!(matches!(
            enumerate_refutation_modules(&g, &q, 2),
            Err(AnalysisError::Graph(GraphError::TooLarge { nodes: 3, cap: 2 }))
        ));
    }

    #[test]
    fn alternative_links_give_distinct_modules() {
        // Two ways down from the collider to the observed node.
        let (g, q) = setup("edge a v\nedge b v\nedge v p\nedge v r\nedge p d\nedge r d", "a", "b", &["d"]);
        let ms = enumerate_refutation_modules(&g, &q, DEFAULT_MODULE_CAP).unwrap();
        assert_eq!(ms.len(), 2);
        assert!(ms.iter().all(|m| m.edges.len() == 4));
    }
}
