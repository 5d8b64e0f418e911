//! Edge-labelled unrooted trees and the graphs they explain.
//!
//! A [`LabeledTree`] has named leaves and unnamed (or optionally named)
//! interior vertices. Edge weights are non-negative integers counting
//! discrete events. Leaf pairs whose path weight is exactly `k` form the
//! edges of the explained graph.

mod distance;
pub(crate) mod newick;
mod ops;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::is_valid_name;

pub use distance::DistanceMatrix;
pub use newick::{parse_tree, NewickTree};

/// Number of events on an edge.
pub type Weight = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("leaf {0:?} has degree {1}; leaves must have exactly one neighbour")]
    LeafDegree(String, usize),
    #[error("name {0:?} is used more than once")]
    DuplicateName(String),
    #[error("invalid name {0:?}")]
    InvalidName(String),
    #[error("no leaf named {0:?}")]
    UnknownLeaf(String),
    #[error("cannot restrict to an empty leaf set")]
    EmptyRestriction,
    #[error("scale factor must be at least 1")]
    ZeroScale,
    #[error("edge weight overflow")]
    Overflow,
    #[error("vertices {0} and {1} are not joined by an edge")]
    NoSuchEdge(usize, usize),
    #[error("edge {0}-{1} touches a leaf; only interior edges can be contracted")]
    LeafEdge(usize, usize),
}

/// Orders names numerically when both are plain integers, otherwise
/// lexicographically, with numeric names first.
pub fn name_cmp(a: &str, b: &str) -> Ordering {
    let numeric = |s: &str| -> Option<u128> {
        (!s.is_empty() && s.bytes().all(|c| c.is_ascii_digit()) && (s == "0" || !s.starts_with('0')))
            .then(|| s.parse().ok())
            .flatten()
    };
    match (numeric(a), numeric(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Node {
    pub(crate) name: Option<String>,
    pub(crate) leaf: bool,
}

/// Incremental construction of a [`LabeledTree`]; all invariants are
/// checked in [`TreeBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
    edges: Vec<(usize, usize, Weight)>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, name: impl Into<String>) -> usize {
        self.nodes.push(Node {
            name: Some(name.into()),
            leaf: true,
        });
        self.nodes.len() - 1
    }

    pub fn interior(&mut self) -> usize {
        self.nodes.push(Node {
            name: None,
            leaf: false,
        });
        self.nodes.len() - 1
    }

    pub fn named_interior(&mut self, name: impl Into<String>) -> usize {
        self.nodes.push(Node {
            name: Some(name.into()),
            leaf: false,
        });
        self.nodes.len() - 1
    }

    pub(crate) fn node(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn edge(&mut self, u: usize, v: usize, weight: Weight) -> &mut Self {
        self.edges.push((u, v, weight));
        self
    }

    pub fn build(self) -> Result<LabeledTree, TreeError> {
        let n = self.nodes.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if self.edges.len() != n - 1 {
            return Err(TreeError::NotATree(format!(
                "{} vertices need {} edges, got {}",
                n,
                n - 1,
                self.edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &self.edges {
            if u >= n || v >= n {
                return Err(TreeError::NotATree(format!("edge {u}-{v} names a missing vertex")));
            }
            if u == v {
                return Err(TreeError::NotATree(format!("self-loop on vertex {u}")));
            }
            if adj[u].iter().any(|&(x, _)| x == v) {
                return Err(TreeError::NotATree(format!("duplicate edge {u}-{v}")));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        // n - 1 edges plus connectivity rules out cycles
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !std::mem::replace(&mut seen[v], true) {
                    stack.push(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(TreeError::NotATree("disconnected".into()));
        }

        let mut names = BTreeSet::new();
        for (v, node) in self.nodes.iter().enumerate() {
            if let Some(name) = &node.name {
                if !is_valid_name(name) {
                    return Err(TreeError::InvalidName(name.clone()));
                }
                if !names.insert(name.clone()) {
                    return Err(TreeError::DuplicateName(name.clone()));
                }
            }
            if node.leaf {
                let name = node.name.clone().ok_or_else(|| TreeError::InvalidName(String::new()))?;
                if adj[v].len() > 1 || (adj[v].is_empty() && n > 1) {
                    return Err(TreeError::LeafDegree(name, adj[v].len()));
                }
            }
        }
        Ok(LabeledTree {
            nodes: self.nodes,
            adj,
        })
    }
}

/// An unrooted tree with non-negative integer edge weights whose leaves
/// carry unique names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    nodes: Vec<Node>,
    adj: Vec<Vec<(usize, Weight)>>,
}

impl LabeledTree {
    /// The one-vertex tree; it explains `K1`.
    pub fn single_leaf(name: impl Into<String>) -> Result<Self, TreeError> {
        let mut b = TreeBuilder::new();
        b.leaf(name);
        b.build()
    }

    /// A star whose centre is joined to each named leaf with the given weight.
    pub fn star<S: Into<String>>(
        leaves: impl IntoIterator<Item = (S, Weight)>,
    ) -> Result<Self, TreeError> {
        let mut b = TreeBuilder::new();
        let c = b.interior();
        for (name, w) in leaves {
            let l = b.leaf(name);
            b.edge(c, l, w);
        }
        b.build()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.nodes[v].leaf
    }

    pub fn name(&self, v: usize) -> Option<&str> {
        self.nodes[v].name.as_deref()
    }

    pub(crate) fn node(&self, v: usize) -> &Node {
        &self.nodes[v]
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, Weight)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<Weight> {
        self.adj
            .get(u)?
            .iter()
            .find(|&&(x, _)| x == v)
            .map(|&(_, w)| w)
    }

    /// Edges `(u, v, weight)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, Weight)> {
        let mut out: Vec<_> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, a)| a.iter().filter(move |&&(v, _)| u < v).map(move |&(v, w)| (u, v, w)))
            .collect();
        out.sort_unstable();
        out
    }

    /// An edge whose endpoints are both interior vertices.
    pub fn is_interior_edge(&self, u: usize, v: usize) -> bool {
        !self.is_leaf(u) && !self.is_leaf(v)
    }

    /// Leaf vertex ids ordered by [`name_cmp`] on their names.
    pub fn leaves(&self) -> Vec<usize> {
        let mut leaves: Vec<usize> = (0..self.nodes.len()).filter(|&v| self.is_leaf(v)).collect();
        leaves.sort_by(|&a, &b| name_cmp(self.leaf_name(a), self.leaf_name(b)));
        leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.leaf).count()
    }

    pub fn leaf_names(&self) -> Vec<String> {
        self.leaves().into_iter().map(|v| self.leaf_name(v).to_owned()).collect()
    }

    pub(crate) fn leaf_name(&self, v: usize) -> &str {
        self.nodes[v].name.as_deref().expect("leaves are named")
    }

    pub fn leaf_by_name(&self, name: &str) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.leaf && n.name.as_deref() == Some(name))
    }

    pub fn max_weight(&self) -> Weight {
        self.adj.iter().flatten().map(|&(_, w)| w).max().unwrap_or(0)
    }

    /// Smallest leaf name (in [`name_cmp`] order) in the component of `v`
    /// after deleting the edge to `parent`.
    pub(crate) fn subtree_min_leaf(&self, v: usize, parent: Option<usize>) -> Option<&str> {
        let mut best: Option<&str> = None;
        let mut stack = vec![(v, parent)];
        while let Some((u, from)) = stack.pop() {
            if self.is_leaf(u) {
                let name = self.leaf_name(u);
                if best.is_none_or(|b| name_cmp(name, b) == Ordering::Less) {
                    best = Some(name);
                }
            }
            for &(w, _) in &self.adj[u] {
                if Some(w) != from {
                    stack.push((w, Some(u)));
                }
            }
        }
        best
    }

    /// A string that is equal for two trees exactly when they are
    /// isomorphic by a map preserving leaf names and edge weights.
    /// Interior names are ignored.
    pub fn canonical_key(&self) -> String {
        match self.leaves().first() {
            Some(&anchor) => self.canonical_subtree(anchor, None),
            None => self.canonical_subtree(0, None),
        }
    }

    pub(crate) fn canonical_subtree(&self, v: usize, parent: Option<usize>) -> String {
        let mut children: Vec<String> = self.adj[v]
            .iter()
            .filter(|&&(w, _)| Some(w) != parent)
            .map(|&(w, weight)| format!("{}:{}", self.canonical_subtree(w, Some(v)), weight))
            .collect();
        children.sort();
        let label = if self.is_leaf(v) { self.leaf_name(v) } else { "" };
        if children.is_empty() {
            label.to_owned()
        } else {
            format!("({}){}", children.join(","), label)
        }
    }

    /// Leaf name to vertex id.
    pub fn leaf_index(&self) -> BTreeMap<String, usize> {
        self.leaves()
            .into_iter()
            .map(|v| (self.leaf_name(v).to_owned(), v))
            .collect()
    }

    /// Newick text anchored at an interior vertex next to the smallest
    /// leaf (or at that leaf when there is no interior vertex).
    pub fn to_newick(&self) -> String {
        newick::write_unrooted(self)
    }
}

impl std::fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_newick())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_rejects_non_trees() {
        let mut b = TreeBuilder::new();
        let (a, c, x) = (b.leaf("a"), b.leaf("c"), b.interior());
        b.edge(a, x, 1).edge(c, x, 1).edge(a, c, 1);
        assert!(matches!(b.build(), Err(TreeError::NotATree(_))));

        let mut b = TreeBuilder::new();
        let (a, c) = (b.leaf("a"), b.leaf("a"));
        b.edge(a, c, 1);
        assert_eq!(b.build(), Err(TreeError::DuplicateName("a".into())));

        let mut b = TreeBuilder::new();
        let (a, c, d) = (b.leaf("a"), b.leaf("c"), b.leaf("d"));
        b.edge(a, c, 1).edge(a, d, 1);
        assert_eq!(b.build(), Err(TreeError::LeafDegree("a".into(), 2)));

        assert_eq!(TreeBuilder::new().build(), Err(TreeError::Empty));
        assert!(matches!(LabeledTree::single_leaf("a b"), Err(TreeError::InvalidName(_))));
    }

    #[test]
    fn natural_name_order() {
        let mut names = vec!["10", "b", "2", "a", "01"];
        names.sort_by(|a, b| name_cmp(a, b));
        assert_eq!(names, vec!["2", "10", "01", "a", "b"]);
    }

    #[test]
    fn canonical_key_ignores_ids_and_interior_names() {
        let s1 = LabeledTree::star([("a", 1), ("b", 2), ("c", 0)]).unwrap();
        let mut b = TreeBuilder::new();
        let c = b.leaf("c");
        let x = b.named_interior("x");
        let bb = b.leaf("b");
        let a = b.leaf("a");
        b.edge(x, a, 1).edge(bb, x, 2).edge(c, x, 0);
        let s2 = b.build().unwrap();
        assert_ne!(s1, s2);
        assert_eq!(s1.canonical_key(), s2.canonical_key());
        let s3 = LabeledTree::star([("a", 2), ("b", 1), ("c", 0)]).unwrap();
        assert_ne!(s1.canonical_key(), s3.canonical_key());
    }
}
