//! Recognition of exactly-2 graphs and witness construction.
//!
//! A graph is explained by some tree for `k = 2` exactly when every
//! connected component of its false-twin quotient is a block graph. The
//! witness is built per quotient component from the block structure,
//! the component trees are joined by heavy edges, and the twin classes are
//! blown back up.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{Graph, TwinPartition};
use crate::tree::{name_cmp, LabeledTree, Node, TreeBuilder, TreeError, Weight};

/// The only `k` for which recognition is characterised.
pub const RECOGNITION_K: Weight = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognizeError {
    #[error("recognition is only characterised for k = 2, got k = {0}")]
    UnsupportedK(Weight),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("the graph is not connected")]
    NotConnected,
    #[error("a block-graph tree needs at least two vertices")]
    TooSmall,
    #[error("block {0:?} is not a clique")]
    NotBlockGraph(BTreeSet<usize>),
    #[error("no component trees to join")]
    NoComponents,
    #[error("twin class representative {0:?} is not a leaf of the tree")]
    MissingRepresentative(String),
    #[error("leaf names and vertex names differ: only in tree {only_tree:?}, only in graph {only_graph:?}")]
    NameMismatch {
        only_tree: Vec<String>,
        only_graph: Vec<String>,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Result of [`recognize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecognitionOutcome {
    /// A canonical tree explaining the graph for `k = 2`.
    Explained(LabeledTree),
    /// A block of the quotient that is not a clique, given as the input
    /// vertex ids of the class representatives.
    NotExplained(BTreeSet<usize>),
}

impl RecognitionOutcome {
    pub fn is_explained(&self) -> bool {
        matches!(self, RecognitionOutcome::Explained(_))
    }

    pub fn witness(&self) -> Option<&LabeledTree> {
        match self {
            RecognitionOutcome::Explained(t) => Some(t),
            RecognitionOutcome::NotExplained(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&BTreeSet<usize>> {
        match self {
            RecognitionOutcome::Explained(_) => None,
            RecognitionOutcome::NotExplained(b) => Some(b),
        }
    }
}

/// Tree for a connected block graph: bridges become 2-edges, larger
/// cliques become stars of 1-edges, and each cut vertex becomes an
/// interior vertex carrying its name on a pendant 0-edge leaf.
pub fn construct_block_tree(g: &Graph) -> Result<LabeledTree, RecognizeError> {
    if g.n() < 2 {
        return Err(RecognizeError::TooSmall);
    }
    if !g.is_connected() {
        return Err(RecognizeError::NotConnected);
    }
    let decomposition = g.block_decomposition();
    if let Some(block) = decomposition.blocks.iter().find(|b| !g.is_clique(b)) {
        return Err(RecognizeError::NotBlockGraph(block.clone()));
    }

    let mut b = TreeBuilder::new();
    let vertex_node: Vec<usize> = (0..g.n())
        .map(|v| {
            if decomposition.cut_vertices.contains(&v) {
                let hub = b.interior();
                let leaf = b.leaf(g.name(v).into_owned());
                b.edge(hub, leaf, 0);
                hub
            } else {
                b.leaf(g.name(v).into_owned())
            }
        })
        .collect();
    for block in &decomposition.blocks {
        let members: Vec<usize> = block.iter().copied().collect();
        if let [u, v] = members[..] {
            b.edge(vertex_node[u], vertex_node[v], 2);
        } else {
            let centre = b.interior();
            for &u in &members {
                b.edge(centre, vertex_node[u], 1);
            }
        }
    }
    Ok(b.build()?)
}

/// Copies `t` into `b`, returning the new id of every vertex.
fn copy_into(b: &mut TreeBuilder, t: &LabeledTree) -> Vec<usize> {
    let ids: Vec<usize> = (0..t.node_count()).map(|v| b.node(t.node(v).clone())).collect();
    for (u, v, w) in t.edges() {
        b.edge(ids[u], ids[v], w);
    }
    ids
}

/// Joins trees explaining the components of a graph into one tree.
/// Two-leaf trees are first split into 2-paths; every tree is then
/// represented by its smallest interior vertex (a single leaf gets a hub
/// on a 0-edge) and the representatives are chained by `(k+1)`-edges.
pub fn join_components(trees: &[LabeledTree], k: Weight) -> Result<LabeledTree, RecognizeError> {
    match trees {
        [] => Err(RecognizeError::NoComponents),
        [single] => Ok(single.clone()),
        _ => {
            let mut b = TreeBuilder::new();
            let mut anchors = Vec::with_capacity(trees.len());
            for t in trees {
                if t.node_count() == 1 {
                    let hub = b.interior();
                    let leaf = b.node(t.node(0).clone());
                    b.edge(hub, leaf, 0);
                    anchors.push(hub);
                } else if t.node_count() == 2 {
                    let (x, y, w) = t.edges()[0];
                    let mid = b.interior();
                    let (nx, ny) = (b.node(t.node(x).clone()), b.node(t.node(y).clone()));
                    let left = w / 2;
                    b.edge(nx, mid, left).edge(mid, ny, w - left);
                    anchors.push(mid);
                } else {
                    let ids = copy_into(&mut b, t);
                    let anchor = (0..t.node_count())
                        .find(|&v| !t.is_leaf(v))
                        .expect("a tree with three or more vertices has an interior vertex");
                    anchors.push(ids[anchor]);
                }
            }
            for pair in anchors.windows(2) {
                b.edge(pair[0], pair[1], k + 1);
            }
            Ok(b.build()?)
        }
    }
}

/// Expands every representative leaf of `tstar` into its whole twin
/// class. Leaves of `tstar` are named like the representatives in `g`.
/// A class whose representative edge weighs `k/2` hangs below a new
/// vertex on 0-edges; any other class becomes siblings of equal weight.
pub fn blow_up(
    tstar: &LabeledTree,
    g: &Graph,
    partition: &TwinPartition,
    k: Weight,
) -> Result<LabeledTree, RecognizeError> {
    let mut nodes: Vec<Option<Node>> = (0..tstar.node_count()).map(|v| Some(tstar.node(v).clone())).collect();
    let mut edges: Vec<(usize, usize, Weight)> = tstar.edges();

    for class in partition.classes().iter().filter(|c| c.len() > 1) {
        let rep_name = g.name(class[0]).into_owned();
        let r = tstar
            .leaf_by_name(&rep_name)
            .ok_or_else(|| RecognizeError::MissingRepresentative(rep_name.clone()))?;
        let position = edges.iter().position(|&(u, v, _)| u == r || v == r);
        let (q, w) = match position {
            None => {
                nodes.push(Some(Node {
                    name: None,
                    leaf: false,
                }));
                (nodes.len() - 1, 0)
            }
            Some(i) => {
                let (u, v, w) = edges.swap_remove(i);
                let q = if u == r { v } else { u };
                if nodes[q].as_ref().is_some_and(|n| n.leaf) {
                    // two-leaf tree: give r an interior neighbour first
                    nodes.push(Some(Node {
                        name: None,
                        leaf: false,
                    }));
                    let mid = nodes.len() - 1;
                    edges.push((mid, q, w));
                    (mid, 0)
                } else {
                    (q, w)
                }
            }
        };
        nodes[r] = None;
        let parent = if 2 * w != k {
            q
        } else {
            nodes.push(Some(Node {
                name: None,
                leaf: false,
            }));
            let q2 = nodes.len() - 1;
            edges.push((q, q2, w));
            q2
        };
        let leaf_weight = if parent == q { w } else { 0 };
        for &member in class {
            nodes.push(Some(Node {
                name: Some(g.name(member).into_owned()),
                leaf: true,
            }));
            edges.push((parent, nodes.len() - 1, leaf_weight));
        }
    }

    let mut b = TreeBuilder::new();
    let ids: Vec<Option<usize>> = nodes.into_iter().map(|n| n.map(|n| b.node(n))).collect();
    for (u, v, w) in edges {
        b.edge(ids[u].expect("live vertex"), ids[v].expect("live vertex"), w);
    }
    Ok(b.build()?)
}

/// Decides whether `g` is explained for `k` (which must be 2) and returns
/// either a canonical witness or a non-clique block of the quotient.
pub fn recognize(g: &Graph, k: Weight) -> Result<RecognitionOutcome, RecognizeError> {
    if k != RECOGNITION_K {
        return Err(RecognizeError::UnsupportedK(k));
    }
    if g.n() == 0 {
        return Err(RecognizeError::NoComponents);
    }
    let partition = g.false_twin_partition();
    let quotient = g.quotient(&partition).expect("the partition is the twin partition of g");

    let mut trees = Vec::new();
    for component in quotient.connected_components() {
        let order: Vec<usize> = component.iter().copied().collect();
        let sub = quotient
            .induced_subgraph(&component)
            .expect("component vertices are in range");
        if let Some(block) = sub.non_clique_block() {
            let certificate = block
                .iter()
                .map(|&i| partition.representative(order[i]))
                .collect();
            return Ok(RecognitionOutcome::NotExplained(certificate));
        }
        trees.push(if sub.n() == 1 {
            LabeledTree::single_leaf(sub.name(0).into_owned())?
        } else {
            construct_block_tree(&sub)?
        });
    }
    let joined = join_components(&trees, k)?;
    let witness = blow_up(&joined, g, &partition, k)?.canonicalize();
    debug_assert_eq!(verify(&witness, g, k), Ok(true));
    Ok(RecognitionOutcome::Explained(witness))
}

/// Whether `t` explains `g` for `k`, matching leaves to vertices by name.
pub fn verify(t: &LabeledTree, g: &Graph, k: Weight) -> Result<bool, RecognizeError> {
    if k == 0 {
        return Err(RecognizeError::ZeroK);
    }
    let tree_names: BTreeSet<String> = t.leaf_names().into_iter().collect();
    let graph_names: BTreeSet<String> = g.names().into_iter().collect();
    if tree_names != graph_names {
        let sorted = |set: BTreeSet<&String>| {
            let mut v: Vec<String> = set.into_iter().cloned().collect();
            v.sort_by(|a, b| name_cmp(a, b));
            v
        };
        return Err(RecognizeError::NameMismatch {
            only_tree: sorted(tree_names.difference(&graph_names).collect()),
            only_graph: sorted(graph_names.difference(&tree_names).collect()),
        });
    }
    let d = t.distance_matrix();
    let row: BTreeMap<&str, usize> = d.names().iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let index: Vec<usize> = (0..g.n()).map(|v| row[g.name(v).as_ref()]).collect();
    Ok((0..g.n()).all(|u| (u + 1..g.n()).all(|v| (d.get(index[u], index[v]) == k) == g.has_edge(u, v))))
}
