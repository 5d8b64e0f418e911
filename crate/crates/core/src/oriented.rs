//! Rooted trees and the directed exactly-k relation.
//!
//! In a rooted tree, leaf `x` has an arc to leaf `y` when the path from
//! `x` up to their last common ancestor weighs 0 and the path from there
//! down to `y` weighs `k`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{Graph, OrientedGraph, ParseError};
use crate::tree::newick::write_from;
use crate::tree::{name_cmp, LabeledTree, NewickTree, Node, TreeBuilder, TreeError, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientedError {
    #[error("root {0} is not a vertex of the tree")]
    RootOutOfRange(usize),
    #[error("root {0} is a leaf; the root must be an interior vertex")]
    RootIsLeaf(usize),
    #[error("root placements need a tree with at least two vertices")]
    SingleVertex,
    #[error("the tree is not canonical")]
    NotCanonical,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("the oriented graph is not explainable: {0}")]
    NotExplainable(OrientedCertificate),
    #[error("leaf names and vertex names differ: only in tree {only_tree:?}, only in graph {only_graph:?}")]
    NameMismatch {
        only_tree: Vec<String>,
        only_graph: Vec<String>,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// An edge-weighted tree with a designated interior root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedLabeledTree {
    tree: LabeledTree,
    root: usize,
}

impl RootedLabeledTree {
    pub fn new(tree: LabeledTree, root: usize) -> Result<Self, OrientedError> {
        if root >= tree.node_count() {
            return Err(OrientedError::RootOutOfRange(root));
        }
        if tree.is_leaf(root) {
            return Err(OrientedError::RootIsLeaf(root));
        }
        Ok(RootedLabeledTree { tree, root })
    }

    /// Reads Newick text whose written root is the tree root.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let NewickTree { tree, anchor } = NewickTree::parse(text, true)?;
        Ok(RootedLabeledTree { tree, root: anchor })
    }

    pub fn tree(&self) -> &LabeledTree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// The same tree with the root forgotten.
    pub fn underlying_tree(&self) -> LabeledTree {
        self.tree.clone()
    }

    /// Parent of every vertex (`None` for the root) and weighted depth.
    fn parents_and_depths(&self) -> (Vec<Option<usize>>, Vec<Weight>, Vec<usize>) {
        let n = self.tree.node_count();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut level = vec![0; n];
        let mut seen = vec![false; n];
        seen[self.root] = true;
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            for &(v, w) in self.tree.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    depth[v] = depth[u] + w;
                    level[v] = level[u] + 1;
                    stack.push(v);
                }
            }
        }
        (parent, depth, level)
    }

    /// The oriented graph on the leaves (in name order) with an arc
    /// `x -> y` when `x` sits 0 below `lca(x, y)` and `y` sits `k` below.
    pub fn directed_explain(&self, k: Weight) -> OrientedGraph {
        let (parent, depth, level) = self.parents_and_depths();
        let lca = |mut a: usize, mut b: usize| {
            while level[a] > level[b] {
                a = parent[a].expect("non-root has a parent");
            }
            while level[b] > level[a] {
                b = parent[b].expect("non-root has a parent");
            }
            while a != b {
                a = parent[a].expect("non-root has a parent");
                b = parent[b].expect("non-root has a parent");
            }
            a
        };
        let leaves = self.tree.leaves();
        let mut arcs = Vec::new();
        for (i, &x) in leaves.iter().enumerate() {
            for (j, &y) in leaves.iter().enumerate() {
                if i != j {
                    let a = lca(x, y);
                    if depth[x] == depth[a] && depth[y] - depth[a] == k {
                        arcs.push((i, j));
                    }
                }
            }
        }
        let names: Vec<String> = self.tree.leaf_names();
        OrientedGraph::from_arcs(leaves.len(), arcs)
            .expect("an up-weight of 0 and a down-weight of k >= 1 cannot hold both ways")
            .with_names(names)
            .expect("leaf names are valid and unique")
    }

    /// Every non-root interior vertex has degree at least 3, the root has
    /// at least 2 children, and no edge between interior vertices weighs 0.
    pub fn is_canonical(&self) -> bool {
        let t = &self.tree;
        (0..t.node_count()).all(|v| {
            t.is_leaf(v) || t.degree(v) >= if v == self.root { 2 } else { 3 }
        }) && t
            .edges()
            .iter()
            .all(|&(u, v, w)| w > 0 || t.is_leaf(u) || t.is_leaf(v))
    }

    /// Equal for two rooted trees exactly when an isomorphism maps root to
    /// root and preserves leaf names and weights.
    pub fn canonical_key(&self) -> String {
        self.tree.canonical_subtree(self.root, None)
    }

    pub fn to_newick(&self) -> String {
        write_from(&self.tree, self.root)
    }
}

impl std::fmt::Display for RootedLabeledTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_newick())
    }
}

/// How leaf edges are subdivided to place a root next to a leaf `v` with
/// neighbour `w`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LeafRooting {
    /// For `λ(vw) > 0`: `λ(vv*) = 0` and `λ(v*w) = λ(vw)`, so that `v`
    /// hangs from the root on a 0-edge.
    #[default]
    Corrected,
    /// For `λ(vw) > 0`: `λ(vv*) = λ(vw)` and `λ(v*w) = 0`, literally
    /// transcribed. Produces an inner 0-edge.
    AsWritten,
    /// For `λ(vw) = 0` only: both halves weigh 0.
    ZeroLeaves,
}

fn subdivide(t: &LabeledTree, u: usize, v: usize, wu: Weight, wv: Weight) -> RootedLabeledTree {
    let mut b = TreeBuilder::new();
    let ids: Vec<usize> = (0..t.node_count()).map(|x| b.node(t.node(x).clone())).collect();
    for (x, y, w) in t.edges() {
        if (x, y) != (u.min(v), u.max(v)) {
            b.edge(ids[x], ids[y], w);
        }
    }
    let root = b.interior();
    b.edge(ids[u], root, wu).edge(root, ids[v], wv);
    RootedLabeledTree {
        tree: b.build().expect("subdividing an edge keeps a tree"),
        root,
    }
}

/// The rooted trees obtained from a canonical tree by rooting at every
/// interior vertex, on every leaf edge (see [`LeafRooting`]), and at every
/// integer split of every edge of weight at least 2. Duplicates are
/// removed; the order is the order of generation.
pub fn enumerate_rooted(t: &LabeledTree, leaf_rooting: LeafRooting) -> Result<Vec<RootedLabeledTree>, OrientedError> {
    if t.node_count() < 2 {
        return Err(OrientedError::SingleVertex);
    }
    if !t.is_canonical() {
        return Err(OrientedError::NotCanonical);
    }
    let mut out = Vec::new();
    for v in (0..t.node_count()).filter(|&v| !t.is_leaf(v)) {
        out.push(RootedLabeledTree {
            tree: t.clone(),
            root: v,
        });
    }
    for v in t.leaves() {
        let (w, weight) = t.neighbors(v)[0];
        match leaf_rooting {
            LeafRooting::Corrected if weight > 0 => out.push(subdivide(t, v, w, 0, weight)),
            LeafRooting::AsWritten if weight > 0 => out.push(subdivide(t, v, w, weight, 0)),
            LeafRooting::ZeroLeaves if weight == 0 => out.push(subdivide(t, v, w, 0, 0)),
            _ => {}
        }
    }
    for (u, v, m) in t.edges() {
        for j in 1..m {
            out.push(subdivide(t, u, v, j, m - j));
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|r| seen.insert(r.canonical_key()));
    Ok(out)
}

/// The undirected graph with the arc directions forgotten.
pub fn underlying_graph(d: &OrientedGraph) -> Graph {
    d.underlying()
}

/// Why an oriented graph is not explainable. Vertex ids refer to the input
/// graph and are class representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrientedCertificate {
    /// The vertices of a cycle of the underlying quotient, in order.
    Cycle(Vec<usize>),
    /// `x -> z <- y` with `x` and `y` non-adjacent, as `(x, z, y)`.
    InStar(usize, usize, usize),
}

impl std::fmt::Display for OrientedCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrientedCertificate::Cycle(c) => write!(f, "cycle {c:?}"),
            OrientedCertificate::InStar(x, z, y) => write!(f, "in-star {x} -> {z} <- {y}"),
        }
    }
}

/// A cycle in an undirected graph, if there is one.
fn find_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if v == parent[u] {
                    continue;
                }
                if seen[v] {
                    // v was reached before; join the two tree paths
                    let ancestors = |mut x: usize| {
                        let mut path = vec![x];
                        while parent[x] != usize::MAX {
                            x = parent[x];
                            path.push(x);
                        }
                        path
                    };
                    let (pu, pv) = (ancestors(u), ancestors(v));
                    let common = pu.iter().find(|x| pv.contains(x)).copied()?;
                    let mut cycle: Vec<usize> = pu.iter().copied().take_while(|&x| x != common).collect();
                    cycle.push(common);
                    let back: Vec<usize> = pv.iter().copied().take_while(|&x| x != common).collect();
                    cycle.extend(back.into_iter().rev());
                    return Some(cycle);
                }
                seen[v] = true;
                parent[v] = u;
                stack.push(v);
            }
        }
    }
    None
}

/// Decides whether `d` is explained by some rooted tree for `k = 2`: the
/// point-determining quotient must be an oriented forest in which no vertex
/// has two in-neighbours.
pub fn recognize_oriented(d: &OrientedGraph) -> Result<(), OrientedCertificate> {
    let partition = d.twin_partition();
    let q = d.quotient(&partition).expect("the partition is the twin partition of d");
    let rep = |i: usize| partition.representative(i);
    if let Some(cycle) = find_cycle(&q.underlying()) {
        return Err(OrientedCertificate::Cycle(cycle.into_iter().map(rep).collect()));
    }
    for z in 0..q.n() {
        let mut inc = q.in_neighbors(z).iter();
        if let (Some(&x), Some(&y)) = (inc.next(), inc.next()) {
            return Err(OrientedCertificate::InStar(rep(x), rep(z), rep(y)));
        }
    }
    Ok(())
}

/// Builds a rooted tree explaining `d` for `k = 2`. Each quotient
/// component is an out-tree rooted at its source; its arcs become 2-edges
/// and every vertex with out-arcs holds its leaf on a 0-edge. Twin classes
/// become sibling leaves and several components hang from a new root on
/// 3-edges.
pub fn construct_oriented(d: &OrientedGraph) -> Result<RootedLabeledTree, OrientedError> {
    recognize_oriented(d).map_err(OrientedError::NotExplainable)?;
    let partition = d.twin_partition();
    let q = d.quotient(&partition).expect("the partition is the twin partition of d");
    let members = |i: usize| -> Vec<Node> {
        partition.classes()[i]
            .iter()
            .map(|&v| Node {
                name: Some(d.name(v).into_owned()),
                leaf: true,
            })
            .collect()
    };

    let mut b = TreeBuilder::new();
    let components = q.underlying().connected_components();
    let super_root = (components.len() > 1).then(|| b.interior());
    let mut root = super_root;
    for component in &components {
        let source = *component
            .iter()
            .find(|&&v| q.in_neighbors(v).is_empty())
            .expect("a recognised component has a source");
        if component.len() == 1 {
            let hub = match super_root {
                Some(r) => r,
                None => b.interior(),
            };
            let weight = if super_root.is_some() { 3 } else { 0 };
            for node in members(source) {
                let leaf = b.node(node);
                b.edge(hub, leaf, weight);
            }
            root.get_or_insert(hub);
            continue;
        }
        let mut stack = vec![(source, None::<usize>)];
        while let Some((v, parent)) = stack.pop() {
            let children = q.out_neighbors(v);
            let (attach, weight) = match parent {
                Some(p) => (Some(p), 2),
                None => (super_root, 3),
            };
            if children.is_empty() {
                let p = attach.expect("a non-source vertex has a parent");
                for node in members(v) {
                    let leaf = b.node(node);
                    b.edge(p, leaf, weight);
                }
            } else {
                let hub = b.interior();
                if let Some(p) = attach {
                    b.edge(p, hub, weight);
                }
                root.get_or_insert(hub);
                for node in members(v) {
                    let leaf = b.node(node);
                    b.edge(hub, leaf, 0);
                }
                for &c in children {
                    stack.push((c, Some(hub)));
                }
            }
        }
    }
    let tree = b.build()?;
    let rooted = RootedLabeledTree::new(tree, root.expect("at least one component"))?;
    debug_assert_eq!(verify_oriented(&rooted, d, 2), Ok(true));
    Ok(rooted)
}

/// Whether `t` explains `d` for `k` under the directed relation, matching
/// leaves to vertices by name.
pub fn verify_oriented(t: &RootedLabeledTree, d: &OrientedGraph, k: Weight) -> Result<bool, OrientedError> {
    if k == 0 {
        return Err(OrientedError::ZeroK);
    }
    let tree_names: BTreeSet<String> = t.tree.leaf_names().into_iter().collect();
    let graph_names: BTreeSet<String> = d.names().into_iter().collect();
    if tree_names != graph_names {
        let sorted = |set: BTreeSet<&String>| {
            let mut v: Vec<String> = set.into_iter().cloned().collect();
            v.sort_by(|a, b| name_cmp(a, b));
            v
        };
        return Err(OrientedError::NameMismatch {
            only_tree: sorted(tree_names.difference(&graph_names).collect()),
            only_graph: sorted(graph_names.difference(&tree_names).collect()),
        });
    }
    let explained = t.directed_explain(k);
    let index: BTreeMap<String, usize> = explained.names().into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    let map: Vec<usize> = (0..d.n()).map(|v| index[d.name(v).as_ref()]).collect();
    Ok(explained.arc_count() == d.arc_count() && d.arcs().iter().all(|&(u, v)| explained.has_arc(map[u], map[v])))
}
