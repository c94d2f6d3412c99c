use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::GraphError;

/// Index of a node inside a [`Dag`].
///
/// Indices follow the lexicographic order of node names, so sorting by index
/// and sorting by name agree.
pub type NodeIx = usize;

/// An immutable directed acyclic graph with named nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    names: Vec<String>,
    index: HashMap<String, NodeIx>,
    parents: Vec<Vec<NodeIx>>,
    children: Vec<Vec<NodeIx>>,
    edges: Vec<(NodeIx, NodeIx)>,
}

impl Dag {
    /// Builds a graph from node names and `(parent, child)` name pairs.
    ///
    /// Every edge endpoint must appear in `nodes`.
    pub fn new<N, E, S>(nodes: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let names: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        let names: Vec<String> = names.into_iter().collect();
        let index: HashMap<String, NodeIx> = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();

        let mut pairs = Vec::new();
        for (p, c) in edges {
            let (p, c): (String, String) = (p.into(), c.into());
            let pi = *index.get(&p).ok_or_else(|| GraphError::UnknownNode(p.clone()))?;
            let ci = *index.get(&c).ok_or_else(|| GraphError::UnknownNode(c.clone()))?;
            pairs.push((pi, ci));
        }
        Self::assemble(names, index, pairs)
    }

    /// Builds a graph on `names` (which must be distinct) from index pairs.
    pub fn from_indexed(names: Vec<String>, edges: &[(NodeIx, NodeIx)]) -> Result<Self, GraphError> {
        // Re-sort names so the index order invariant holds, remapping edges.
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut remap = vec![0; names.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let sorted: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
        let index: HashMap<String, NodeIx> = sorted.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        if index.len() != sorted.len() {
            return Err(GraphError::DuplicateNode(
                sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0].clone()).unwrap_or_default(),
            ));
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for &(p, c) in edges {
            if p >= names.len() || c >= names.len() {
                return Err(GraphError::UnknownNode(format!("#{}", p.max(c))));
            }
            pairs.push((remap[p], remap[c]));
        }
        Self::assemble(sorted, index, pairs)
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, NodeIx>,
        pairs: Vec<(NodeIx, NodeIx)>,
    ) -> Result<Self, GraphError> {
        let n = names.len();
        let mut seen = BTreeSet::new();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in &pairs {
            if p == c {
                return Err(GraphError::SelfLoop(names[p].clone()));
            }
            if !seen.insert((p, c)) {
                return Err(GraphError::DuplicateEdge(names[p].clone(), names[c].clone()));
            }
            parents[c].push(p);
            children[p].push(c);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
        }
        let dag = Dag { names, index, parents, children, edges: seen.into_iter().collect() };
        if let Some(cycle) = dag.find_cycle() {
            return Err(GraphError::Cycle(cycle.into_iter().map(|i| dag.names[i].clone()).collect()));
        }
        Ok(dag)
    }

    /// Returns one directed cycle if the adjacency contains any.
    fn find_cycle(&self) -> Option<Vec<NodeIx>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.len();
        let mut state = vec![0u8; n];
        let mut stack: Vec<NodeIx> = Vec::new();
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut iters: Vec<(NodeIx, usize)> = vec![(root, 0)];
            state[root] = 1;
            stack.push(root);
            while let Some(&mut (v, ref mut next)) = iters.last_mut() {
                if let Some(&w) = self.children[v].get(*next) {
                    *next += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            stack.push(w);
                            iters.push((w, 0));
                        }
                        1 => {
                            let start = stack.iter().position(|&x| x == w).unwrap();
                            return Some(stack[start..].to_vec());
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                    iters.pop();
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: NodeIx) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<NodeIx> {
        self.index.get(name).copied()
    }

    pub fn parents(&self, v: NodeIx) -> &[NodeIx] {
        &self.parents[v]
    }

    pub fn children(&self, v: NodeIx) -> &[NodeIx] {
        &self.children[v]
    }

    /// All edges as `(parent, child)`, sorted.
    pub fn edges(&self) -> &[(NodeIx, NodeIx)] {
        &self.edges
    }

    pub fn has_edge(&self, parent: NodeIx, child: NodeIx) -> bool {
        self.children[parent].binary_search(&child).is_ok()
    }

    /// Whether `u` and `v` are joined by an edge in either direction.
    pub fn adjacent(&self, u: NodeIx, v: NodeIx) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    /// Neighbors in the undirected skeleton, sorted.
    pub fn neighbors(&self, v: NodeIx) -> Vec<NodeIx> {
        let mut out: Vec<NodeIx> = self.parents[v].iter().chain(&self.children[v]).copied().collect();
        out.sort_unstable();
        out
    }

    /// Nodes in a topological order (parents before children, ties by index).
    pub fn topological_order(&self) -> Vec<NodeIx> {
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<NodeIx> = (0..self.len()).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        order
    }

    /// Membership mask of `seeds` together with all of their ancestors.
    pub fn ancestor_mask(&self, seeds: &[NodeIx]) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        let mut queue: VecDeque<NodeIx> = VecDeque::new();
        for &s in seeds {
            if !mask[s] {
                mask[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &p in &self.parents[v] {
                if !mask[p] {
                    mask[p] = true;
                    queue.push_back(p);
                }
            }
        }
        mask
    }

    /// Membership mask of nodes that are in `targets` or have a descendant there.
    pub fn has_descendant_in(&self, targets: &[NodeIx]) -> Vec<bool> {
        // Exactly the ancestral closure of the targets.
        self.ancestor_mask(targets)
    }

    /// Induced subgraph on the nodes selected by `keep`.
    ///
    /// Returns the subgraph and the old-to-new index map.
    pub fn induced(&self, keep: &[bool]) -> (Dag, Vec<Option<NodeIx>>) {
        let kept: Vec<NodeIx> = (0..self.len()).filter(|&v| keep[v]).collect();
        let mut map = vec![None; self.len()];
        for (new, &old) in kept.iter().enumerate() {
            map[old] = Some(new);
        }
        let names: Vec<String> = kept.iter().map(|&v| self.names[v].clone()).collect();
        let edges: Vec<(NodeIx, NodeIx)> =
            self.edges.iter().filter_map(|&(p, c)| Some((map[p]?, map[c]?))).collect();
        // Kept nodes retain their relative (lexicographic) order, so indices line up.
        let sub = Dag::from_indexed(names, &edges).expect("induced subgraph of a DAG is a DAG");
        (sub, map)
    }

    /// Subgraph formed by an edge set; its nodes are the edge endpoints.
    ///
    /// Returns `None` if some edge is not in this graph.
    pub fn edge_subgraph(&self, edges: &[(NodeIx, NodeIx)]) -> Option<(Dag, Vec<Option<NodeIx>>)> {
        let mut keep = vec![false; self.len()];
        for &(p, c) in edges {
            if p >= self.len() || c >= self.len() || !self.has_edge(p, c) {
                return None;
            }
            keep[p] = true;
            keep[c] = true;
        }
        let kept: Vec<NodeIx> = (0..self.len()).filter(|&v| keep[v]).collect();
        let mut map = vec![None; self.len()];
        for (new, &old) in kept.iter().enumerate() {
            map[old] = Some(new);
        }
        let names: Vec<String> = kept.iter().map(|&v| self.names[v].clone()).collect();
        let sub_edges: Vec<(NodeIx, NodeIx)> =
            edges.iter().map(|&(p, c)| (map[p].unwrap(), map[c].unwrap())).collect();
        let sub = Dag::from_indexed(names, &sub_edges).ok()?;
        Some((sub, map))
    }

    /// Parses the line-oriented graph format.
    ///
    /// ```text
    /// # comment
    /// node a
    /// edge a b
    /// ```
    ///
    /// `node` lines are optional when the file has none at all; once any
    /// `node` line is present, every edge endpoint must be declared.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut declared: Vec<String> = Vec::new();
        let mut edges: Vec<(String, String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["node", id] => declared.push((*id).to_string()),
                ["edge", p, c] => edges.push(((*p).to_string(), (*c).to_string(), line_no)),
                ["node", ..] => {
                    return Err(GraphError::Syntax { line: line_no, message: "expected `node <id>`".into() })
                }
                ["edge", ..] => {
                    return Err(GraphError::Syntax {
                        line: line_no,
                        message: "expected `edge <parent> <child>`".into(),
                    })
                }
                [kw, ..] => {
                    return Err(GraphError::Syntax {
                        line: line_no,
                        message: format!("unknown directive `{kw}`"),
                    })
                }
                [] => unreachable!(),
            }
        }

        let strict = !declared.is_empty();
        let mut nodes: BTreeSet<String> = BTreeSet::new();
        for id in declared {
            if !nodes.insert(id.clone()) {
                return Err(GraphError::DuplicateNode(id));
            }
        }
        for (p, c, line) in &edges {
            for end in [p, c] {
                if strict && !nodes.contains(end) {
                    return Err(GraphError::UnknownNodeAt { line: *line, node: end.clone() });
                }
            }
            if !strict {
                nodes.insert(p.clone());
                nodes.insert(c.clone());
            }
        }
        Dag::new(nodes, edges.into_iter().map(|(p, c, _)| (p, c)))
    }

    /// Serializes to the graph format: nodes first, then edges, both sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            let _ = writeln!(out, "node {name}");
        }
        for &(p, c) in &self.edges {
            let _ = writeln!(out, "edge {} {}", self.names[p], self.names[c]);
        }
        out
    }
}
