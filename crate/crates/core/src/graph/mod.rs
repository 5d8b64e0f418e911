//! Simple undirected and oriented graphs over dense vertex ids.
//!
//! Vertices are always `0..n`. Optional external names live in a side
//! table; a vertex without an explicit name is called by its id.

mod blocks;
mod digraph;
mod format;
mod iso;
mod twins;

use std::borrow::Cow;
use std::collections::BTreeSet;

use thiserror::Error;

pub use blocks::BlockDecomposition;
pub use digraph::OrientedGraph;
pub use format::{parse_graph, parse_oriented, ParseError};
pub use twins::TwinPartition;

/// Errors raised while constructing or transforming graphs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("pair ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex {vertex} is outside 0..{n}")]
    UnknownVertex { vertex: usize, n: usize },
    #[error("arcs ({0}, {1}) and ({1}, {0}) cannot both be present in an oriented graph")]
    Antiparallel(usize, usize),
    #[error("expected {expected} vertex names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("vertex name {0:?} is used more than once")]
    DuplicateName(String),
    #[error("invalid vertex name {0:?}")]
    InvalidName(String),
    #[error("partition is not the false-twin partition of the graph: {0}")]
    InconsistentPartition(String),
}

/// Names may not contain whitespace or Newick punctuation so they survive
/// both text formats unquoted.
pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | ':' | ';' | '[' | ']' | '#'))
}

/// An undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
    names: Option<Vec<String>>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            names: None,
        }
    }

    /// Builds a graph from vertex-id pairs. Duplicate and reversed pairs
    /// collapse to one edge; self-loops and out-of-range ids are rejected.
    pub fn from_edge_list<I>(n: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in pairs {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    /// Attaches external vertex names. Names must be unique.
    pub fn with_names<S: Into<String>>(
        mut self,
        names: impl IntoIterator<Item = S>,
    ) -> Result<Self, GraphError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != self.n() {
            return Err(GraphError::NameCount {
                expected: self.n(),
                got: names.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !is_valid_name(name) {
                return Err(GraphError::InvalidName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(GraphError::DuplicateName(name.clone()));
            }
        }
        let identity = names.iter().enumerate().all(|(i, s)| *s == i.to_string());
        self.names = if identity { None } else { Some(names) };
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|a| a.contains(&v))
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, a)| a.range(u + 1..).map(move |&v| (u, v)))
            .collect()
    }

    pub fn name(&self, v: usize) -> Cow<'_, str> {
        match &self.names {
            Some(names) => Cow::Borrowed(names[v].as_str()),
            None => Cow::Owned(v.to_string()),
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.n()).map(|v| self.name(v).into_owned()).collect()
    }

    /// True when every vertex is called by its own id.
    pub fn has_default_names(&self) -> bool {
        self.names.is_none()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match &self.names {
            Some(names) => names.iter().position(|s| s == name),
            None => name.parse::<usize>().ok().filter(|&v| v < self.n() && v.to_string() == name),
        }
    }

    /// Subgraph induced by `vertices`, relabelled `0..len` in ascending id
    /// order. Names are carried over.
    pub fn induced_subgraph(&self, vertices: &BTreeSet<usize>) -> Result<Graph, GraphError> {
        if let Some(&bad) = vertices.iter().find(|&&v| v >= self.n()) {
            return Err(GraphError::UnknownVertex {
                vertex: bad,
                n: self.n(),
            });
        }
        let order: Vec<usize> = vertices.iter().copied().collect();
        let mut sub = Graph::empty(order.len());
        for (i, &u) in order.iter().enumerate() {
            for (j, &v) in order.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    sub.adj[i].insert(j);
                    sub.adj[j].insert(i);
                }
            }
        }
        sub.with_names(order.iter().map(|&v| self.name(v).into_owned()))
    }

    /// Maximal connected vertex sets, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<BTreeSet<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.insert(v);
                        stack.push(v);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// A graph is a forest when every component with `c` vertices has
    /// `c - 1` edges.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.connected_components().len() == self.n()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    /// Names are not carried over.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let mut g = Graph::empty(self.n() + other.n());
        for (u, v) in self.edges() {
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        for (u, v) in other.edges() {
            g.adj[u + shift].insert(v + shift);
            g.adj[v + shift].insert(u + shift);
        }
        g
    }

    /// Whether the two graphs are isomorphic. Exhaustive search with
    /// degree pruning; intended for graphs of at most about 8 vertices.
    pub fn is_isomorphic_to(&self, other: &Graph) -> bool {
        iso::are_isomorphic(self, other)
    }

    pub fn false_twin_partition(&self) -> TwinPartition {
        twins::false_twin_partition(self)
    }

    /// The point-determining quotient: the subgraph induced by the class
    /// representatives, relabelled so that quotient vertex `i` stands for
    /// class `i` of the partition.
    pub fn quotient(&self, partition: &TwinPartition) -> Result<Graph, GraphError> {
        twins::quotient(self, partition)
    }

    pub fn block_decomposition(&self) -> BlockDecomposition {
        blocks::block_decomposition(self)
    }

    /// Every block induces a complete subgraph.
    pub fn is_block_graph(&self) -> bool {
        self.non_clique_block().is_none()
    }

    /// The first block (in decomposition order) that is not a clique.
    pub fn non_clique_block(&self) -> Option<BTreeSet<usize>> {
        self.block_decomposition()
            .blocks
            .into_iter()
            .find(|b| !self.is_clique(b))
    }

    pub fn is_clique(&self, vertices: &BTreeSet<usize>) -> bool {
        vertices
            .iter()
            .all(|&u| vertices.iter().all(|&v| u == v || self.has_edge(u, v)))
    }

    /// Text form; see [`parse_graph`].
    pub fn to_text(&self) -> String {
        format::write_graph(self)
    }
}

/// Shorthand constructors for the small graphs that recur in tests and
/// examples.
pub mod named {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edge_list(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::from_edge_list(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edge_list(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// A star with centre 0 and `leaves` further vertices.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edge_list(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    /// Two triangles sharing vertex 2.
    pub fn bowtie() -> Graph {
        Graph::from_edge_list(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    /// K4 minus the edge 0-2 (the diamond).
    pub fn diamond() -> Graph {
        Graph::from_edge_list(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]).unwrap()
    }

    /// Triangle 0-1-2 with a pendant vertex 3 on 2.
    pub fn paw() -> Graph {
        Graph::from_edge_list(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap()
    }
}
