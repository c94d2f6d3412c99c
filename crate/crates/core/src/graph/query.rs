use std::collections::BTreeSet;

use super::{Dag, NodeIx};
use crate::error::QueryError;

/// A d-separation query `(A ⟂ B | C)` over a fixed graph.
///
/// A nodes start green, B nodes red and C nodes white.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DSepQuery {
    a: Vec<NodeIx>,
    b: Vec<NodeIx>,
    c: Vec<NodeIx>,
}

impl DSepQuery {
    /// Builds a query from node names.
    pub fn new<S: AsRef<str>>(g: &Dag, a: &[S], b: &[S], c: &[S]) -> Result<Self, QueryError> {
        let lookup = |set: &[S]| -> Result<Vec<NodeIx>, QueryError> {
            set.iter()
                .map(|s| {
                    g.index_of(s.as_ref()).ok_or_else(|| QueryError::UnknownNode(s.as_ref().to_string()))
                })
                .collect()
        };
        Self::from_indices(g, lookup(a)?, lookup(b)?, lookup(c)?)
    }

    pub fn from_indices(
        g: &Dag,
        a: impl IntoIterator<Item = NodeIx>,
        b: impl IntoIterator<Item = NodeIx>,
        c: impl IntoIterator<Item = NodeIx>,
    ) -> Result<Self, QueryError> {
        let a: BTreeSet<NodeIx> = a.into_iter().collect();
        let b: BTreeSet<NodeIx> = b.into_iter().collect();
        let c: BTreeSet<NodeIx> = c.into_iter().collect();
        if let Some(&v) = a.iter().chain(&b).chain(&c).find(|&&v| v >= g.len()) {
            return Err(QueryError::UnknownNode(format!("#{v}")));
        }
        if a.is_empty() {
            return Err(QueryError::EmptySet('A'));
        }
        if b.is_empty() {
            return Err(QueryError::EmptySet('B'));
        }
        if let Some(&v) = a.intersection(&b).chain(a.intersection(&c)).chain(b.intersection(&c)).next() {
            return Err(QueryError::Overlap(g.name(v).to_string()));
        }
        Ok(DSepQuery { a: a.into_iter().collect(), b: b.into_iter().collect(), c: c.into_iter().collect() })
    }

    pub fn a(&self) -> &[NodeIx] {
        &self.a
    }

    pub fn b(&self) -> &[NodeIx] {
        &self.b
    }

    pub fn c(&self) -> &[NodeIx] {
        &self.c
    }

    /// A ∪ B ∪ C, sorted.
    pub fn all(&self) -> Vec<NodeIx> {
        let mut v: Vec<NodeIx> = self.a.iter().chain(&self.b).chain(&self.c).copied().collect();
        v.sort_unstable();
        v
    }

    /// The same query with A and B exchanged.
    pub fn swapped(&self) -> Self {
        DSepQuery { a: self.b.clone(), b: self.a.clone(), c: self.c.clone() }
    }

    pub fn c_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.c {
            m[v] = true;
        }
        m
    }

    /// Re-expresses the query on a subgraph through an old-to-new index map,
    /// dropping members the subgraph does not contain.
    ///
    /// Returns `None` when A or B would become empty.
    pub fn restrict(&self, map: &[Option<NodeIx>]) -> Option<(Vec<NodeIx>, Vec<NodeIx>, Vec<NodeIx>)> {
        let project = |s: &[NodeIx]| -> Vec<NodeIx> { s.iter().filter_map(|&v| map[v]).collect() };
        let (a, b, c) = (project(&self.a), project(&self.b), project(&self.c));
        if a.is_empty() || b.is_empty() {
            None
        } else {
            Some((a, b, c))
        }
    }

    pub fn describe(&self, g: &Dag) -> String {
        let join = |s: &[NodeIx]| s.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(",");
        format!("({} _||_ {} | {})", join(&self.a), join(&self.b), join(&self.c))
    }
}
