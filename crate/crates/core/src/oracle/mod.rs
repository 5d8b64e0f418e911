//! Exhaustive enumeration of small edge-weighted trees.
//!
//! Every phylogenetic topology on up to `max_leaves` leaves is combined
//! with every weighting in `0..=max_weight`, and the graphs these trees
//! explain are collected up to isomorphism. Nothing here relies on the
//! recognition pipeline, so the results can be used to test it.

mod codes;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, OrientedGraph};
use crate::oriented::{enumerate_rooted, LeafRooting, RootedLabeledTree};
use crate::tree::{name_cmp, LabeledTree, TreeBuilder, Weight};
use codes::{
    canonical_graph_code, canonical_oriented_code, graph_code, graph_from_code, oriented_code,
    oriented_from_code, pair_count, permutations, MAX_VERTICES,
};

/// Largest leaf count accepted by [`enumerate_topologies`].
pub const MAX_TOPOLOGY_LEAVES: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("leaf count {0} is outside 1..={MAX_TOPOLOGY_LEAVES}")]
    LeafCount(usize),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("characterisation is only known for k = 1 and k = 2, got k = {0}")]
    UnsupportedK(Weight),
    #[error("the graph has {got} vertices but the budget allows {max}")]
    OverBudget { got: usize, max: usize },
}

/// Limits of an exhaustive run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationBudget {
    pub max_leaves: usize,
    /// Largest edge weight tried. Any weight above `k + 1` explains the
    /// same graphs as `k + 1`.
    pub max_weight: Weight,
    /// Only canonical trees: interior edges weigh at least 1.
    pub canonical_only: bool,
    /// Skip trees with two leaves at path weight 0.
    pub zero_discrete_only: bool,
}

impl EnumerationBudget {
    /// Five leaves, weights up to `k + 1`, canonical trees.
    pub fn for_k(k: Weight) -> Self {
        EnumerationBudget {
            max_leaves: 5,
            max_weight: k + 1,
            canonical_only: true,
            zero_discrete_only: false,
        }
    }

    fn check(&self, k: Weight) -> Result<(), OracleError> {
        if k == 0 {
            return Err(OracleError::ZeroK);
        }
        if !(1..=MAX_TOPOLOGY_LEAVES).contains(&self.max_leaves) {
            return Err(OracleError::LeafCount(self.max_leaves));
        }
        Ok(())
    }
}

/// A topology with its edges listed once and the edge indices on every
/// leaf-to-leaf path, leaves in name order.
struct Shape {
    tree: LabeledTree,
    edges: Vec<(usize, usize)>,
    interior: Vec<bool>,
    paths: Vec<Vec<usize>>,
}

impl Shape {
    fn new(tree: LabeledTree) -> Self {
        let edges: Vec<(usize, usize)> = tree.edges().iter().map(|&(u, v, _)| (u, v)).collect();
        let interior = edges.iter().map(|&(u, v)| tree.is_interior_edge(u, v)).collect();
        let leaves = tree.leaves();
        let edge_index: BTreeMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut paths = Vec::new();
        for (i, &x) in leaves.iter().enumerate() {
            let parent = parents_from(&tree, x);
            for &y in &leaves[i + 1..] {
                let mut path = Vec::new();
                let mut v = y;
                while v != x {
                    let p = parent[v];
                    path.push(edge_index[&(p.min(v), p.max(v))]);
                    v = p;
                }
                paths.push(path);
            }
        }
        Shape {
            tree,
            edges,
            interior,
            paths,
        }
    }

    fn ranges(&self, budget: &EnumerationBudget) -> Vec<(Weight, Weight)> {
        self.interior
            .iter()
            .map(|&inner| {
                let lo = if inner && budget.canonical_only { 1 } else { 0 };
                (lo, budget.max_weight.max(lo))
            })
            .collect()
    }

    fn distances(&self, weights: &[Weight], out: &mut Vec<Weight>) {
        out.clear();
        out.extend(self.paths.iter().map(|p| p.iter().map(|&e| weights[e]).sum::<Weight>()));
    }

    fn with_weights(&self, weights: &[Weight]) -> LabeledTree {
        with_weights(&self.tree, &self.edges, weights)
    }
}

fn parents_from(t: &LabeledTree, root: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; t.node_count()];
    parent[root] = root;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &(v, _) in t.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                stack.push(v);
            }
        }
    }
    parent
}

fn with_weights(t: &LabeledTree, edges: &[(usize, usize)], weights: &[Weight]) -> LabeledTree {
    let mut b = TreeBuilder::new();
    for v in 0..t.node_count() {
        b.node(t.node(v).clone());
    }
    for (&(u, v), &w) in edges.iter().zip(weights) {
        b.edge(u, v, w);
    }
    b.build().expect("reweighting keeps the tree")
}

/// Calls `f` with every weight vector inside `ranges`.
fn for_each_weighting(ranges: &[(Weight, Weight)], mut f: impl FnMut(&[Weight])) {
    let mut w: Vec<Weight> = ranges.iter().map(|r| r.0).collect();
    loop {
        f(&w);
        let mut i = 0;
        loop {
            if i == w.len() {
                return;
            }
            if w[i] < ranges[i].1 {
                w[i] += 1;
                break;
            }
            w[i] = ranges[i].0;
            i += 1;
        }
    }
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// All phylogenetic topologies on leaves `0..n`, each once. Edge weights
/// are all 1.
pub fn enumerate_topologies(n: usize) -> Result<Vec<LabeledTree>, OracleError> {
    enumerate_topologies_named(&default_names(n))
}

/// All phylogenetic topologies on the given leaf names (built by inserting
/// leaves one at a time on an edge or at an interior vertex), each once.
pub fn enumerate_topologies_named<S: AsRef<str>>(names: &[S]) -> Result<Vec<LabeledTree>, OracleError> {
    let n = names.len();
    if !(1..=MAX_TOPOLOGY_LEAVES).contains(&n) {
        return Err(OracleError::LeafCount(n));
    }
    let name = |i: usize| names[i].as_ref().to_owned();
    let mut level = vec![LabeledTree::single_leaf(name(0)).expect("valid name")];
    if n >= 2 {
        let mut b = TreeBuilder::new();
        let (x, y) = (b.leaf(name(0)), b.leaf(name(1)));
        b.edge(x, y, 1);
        level = vec![b.build().expect("two leaves form a tree")];
    }
    for i in 2..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for t in &level {
            let copy = |b: &mut TreeBuilder, skip: Option<(usize, usize)>| {
                for v in 0..t.node_count() {
                    b.node(t.node(v).clone());
                }
                for (u, v, _) in t.edges() {
                    if Some((u, v)) != skip {
                        b.edge(u, v, 1);
                    }
                }
            };
            let mut candidates = Vec::new();
            for (u, v, _) in t.edges() {
                let mut b = TreeBuilder::new();
                copy(&mut b, Some((u, v)));
                let (mid, leaf) = (b.interior(), b.leaf(name(i)));
                b.edge(u, mid, 1).edge(mid, v, 1).edge(mid, leaf, 1);
                candidates.push(b.build().expect("insertion keeps a tree"));
            }
            for hub in (0..t.node_count()).filter(|&v| !t.is_leaf(v)) {
                let mut b = TreeBuilder::new();
                copy(&mut b, None);
                let leaf = b.leaf(name(i));
                b.edge(hub, leaf, 1);
                candidates.push(b.build().expect("insertion keeps a tree"));
            }
            for c in candidates {
                if seen.insert(c.canonical_key()) {
                    next.push(c);
                }
            }
        }
        level = next;
    }
    level.sort_by_cached_key(LabeledTree::canonical_key);
    Ok(level)
}

/// Graphs explained by trees within a budget, as isomorphism classes per
/// vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplainableSet {
    pub k: Weight,
    classes: BTreeMap<usize, BTreeSet<u64>>,
}

impl ExplainableSet {
    pub fn max_vertices(&self) -> usize {
        self.classes.keys().next_back().copied().unwrap_or(0)
    }

    /// Whether some graph isomorphic to `g` is in the set. Graphs larger
    /// than the budget are never contained.
    pub fn contains(&self, g: &Graph) -> bool {
        let n = g.n();
        self.classes.get(&n).is_some_and(|set| {
            set.contains(&canonical_graph_code(n, graph_code(g), &permutations(n)))
        })
    }

    pub fn class_count(&self, n: usize) -> usize {
        self.classes.get(&n).map_or(0, BTreeSet::len)
    }

    /// One representative per isomorphism class on `n` vertices.
    pub fn representatives(&self, n: usize) -> Vec<Graph> {
        self.classes
            .get(&n)
            .into_iter()
            .flatten()
            .map(|&c| graph_from_code(n, c))
            .collect()
    }

    /// One representative per isomorphism class on `n` vertices missing
    /// from the set. Tries every labelled graph, so keep `n` small.
    pub fn non_members(&self, n: usize) -> Vec<Graph> {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
        let perms = permutations(n);
        let classes: BTreeSet<u64> = (0..1u64 << pair_count(n))
            .into_par_iter()
            .map(|c| canonical_graph_code(n, c, &perms))
            .collect();
        let members = self.classes.get(&n);
        classes
            .into_iter()
            .filter(|c| !members.is_some_and(|m| m.contains(c)))
            .map(|c| graph_from_code(n, c))
            .collect()
    }
}

/// Collects the isomorphism classes of all graphs explained for `k` by
/// trees within `budget`.
pub fn explainable_set(budget: &EnumerationBudget, k: Weight) -> Result<ExplainableSet, OracleError> {
    budget.check(k)?;
    let mut classes = BTreeMap::new();
    for n in 1..=budget.max_leaves {
        let shapes: Vec<Shape> = enumerate_topologies(n)?.into_iter().map(Shape::new).collect();
        let labeled: HashSet<u64> = shapes
            .par_iter()
            .map(|shape| {
                let mut found = HashSet::new();
                let mut d = Vec::new();
                for_each_weighting(&shape.ranges(budget), |w| {
                    shape.distances(w, &mut d);
                    if budget.zero_discrete_only && d.contains(&0) {
                        return;
                    }
                    let code = d.iter().enumerate().fold(0u64, |acc, (i, &x)| acc | u64::from(x == k) << i);
                    found.insert(code);
                });
                found
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        let perms = permutations(n);
        let set: BTreeSet<u64> = labeled.into_iter().map(|c| canonical_graph_code(n, c, &perms)).collect();
        classes.insert(n, set);
    }
    Ok(ExplainableSet { k, classes })
}

/// Every tree within `budget` that explains `g` for `k`, once per
/// isomorphism class (leaf names and weights preserved), sorted by
/// [`LabeledTree::canonical_key`]. Leaves carry the vertex names of `g`.
pub fn all_witnesses(g: &Graph, budget: &EnumerationBudget, k: Weight) -> Result<Vec<LabeledTree>, OracleError> {
    budget.check(k)?;
    if g.n() > budget.max_leaves {
        return Err(OracleError::OverBudget {
            got: g.n(),
            max: budget.max_leaves,
        });
    }
    let mut names = g.names();
    names.sort_by(|a, b| name_cmp(a, b));
    let vertex: Vec<usize> = names.iter().map(|s| g.index_of(s).expect("own name")).collect();
    let n = names.len();
    let target: Vec<bool> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| g.has_edge(vertex[i], vertex[j]))
        .collect();

    let shapes: Vec<Shape> = enumerate_topologies_named(&names)?.into_iter().map(Shape::new).collect();
    let found: BTreeMap<String, LabeledTree> = shapes
        .par_iter()
        .flat_map_iter(|shape| {
            let mut hits = Vec::new();
            let mut d = Vec::new();
            for_each_weighting(&shape.ranges(budget), |w| {
                shape.distances(w, &mut d);
                if budget.zero_discrete_only && d.contains(&0) {
                    return;
                }
                if d.iter().zip(&target).all(|(&x, &edge)| (x == k) == edge) {
                    hits.push(shape.with_weights(w));
                }
            });
            hits
        })
        .map(|t| (t.canonical_key(), t))
        .collect();
    Ok(found.into_values().collect())
}

/// Oriented graphs explained by rooted trees, as isomorphism classes per
/// vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSet {
    pub k: Weight,
    classes: BTreeMap<usize, BTreeSet<u64>>,
}

impl OrientedSet {
    pub fn contains(&self, d: &OrientedGraph) -> bool {
        let n = d.n();
        self.classes.get(&n).is_some_and(|set| {
            set.contains(&canonical_oriented_code(n, oriented_code(d), &permutations(n)))
        })
    }

    pub fn class_count(&self, n: usize) -> usize {
        self.classes.get(&n).map_or(0, BTreeSet::len)
    }

    pub fn representatives(&self, n: usize) -> Vec<OrientedGraph> {
        self.classes
            .get(&n)
            .into_iter()
            .flatten()
            .map(|&c| oriented_from_code(n, c))
            .collect()
    }
}

fn collect_oriented(n: usize, labeled: HashSet<u64>) -> BTreeSet<u64> {
    let perms = permutations(n);
    labeled.into_iter().map(|c| canonical_oriented_code(n, c, &perms)).collect()
}

/// Oriented graphs explained for `k` by the rooted versions (all root
/// placements) of canonical trees within `budget`. A single vertex is
/// counted as explained.
pub fn rooted_explainable_set(budget: &EnumerationBudget, k: Weight) -> Result<OrientedSet, OracleError> {
    budget.check(k)?;
    let canonical = EnumerationBudget {
        canonical_only: true,
        ..*budget
    };
    let mut classes = BTreeMap::from([(1, BTreeSet::from([0]))]);
    for n in 2..=budget.max_leaves {
        let shapes: Vec<Shape> = enumerate_topologies(n)?.into_iter().map(Shape::new).collect();
        let labeled: HashSet<u64> = shapes
            .par_iter()
            .map(|shape| {
                let mut found = HashSet::new();
                let mut d = Vec::new();
                for_each_weighting(&shape.ranges(&canonical), |w| {
                    shape.distances(w, &mut d);
                    if budget.zero_discrete_only && d.contains(&0) {
                        return;
                    }
                    let t = shape.with_weights(w);
                    for r in enumerate_rooted(&t, LeafRooting::Corrected).expect("canonical with two or more vertices") {
                        found.insert(oriented_code(&r.directed_explain(k)));
                    }
                });
                found
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        classes.insert(n, collect_oriented(n, labeled));
    }
    Ok(OrientedSet { k, classes })
}

/// Rooted phylogenetic topologies (root of degree at least 2, every other
/// interior vertex of degree at least 3) on the given leaves, as
/// `(tree, root)` with all weights 1.
fn rooted_topologies(names: &[String]) -> Result<Vec<(LabeledTree, usize)>, OracleError> {
    let mut marker = String::from("root");
    while names.contains(&marker) {
        marker.push('_');
    }
    let mut with_marker = names.to_vec();
    with_marker.push(marker.clone());
    let mut out = Vec::new();
    for t in enumerate_topologies_named(&with_marker)? {
        let m = t.leaf_by_name(&marker).expect("marker leaf is present");
        let root = t.neighbors(m)[0].0;
        let mut b = TreeBuilder::new();
        let ids: Vec<Option<usize>> = (0..t.node_count())
            .map(|v| (v != m).then(|| b.node(t.node(v).clone())))
            .collect();
        for (u, v, w) in t.edges() {
            if let (Some(x), Some(y)) = (ids[u], ids[v]) {
                b.edge(x, y, w);
            }
        }
        out.push((b.build().expect("removing a leaf keeps a tree"), ids[root].expect("root is kept")));
    }
    Ok(out)
}

/// All rooted canonical trees with weights up to `max_weight` whose
/// underlying canonical tree is `t`, found by trying every rooted
/// topology and weighting. Sorted by rooted canonical key; empty for a
/// single leaf.
pub fn brute_force_rootings(t: &LabeledTree) -> Result<Vec<RootedLabeledTree>, OracleError> {
    let names = t.leaf_names();
    if names.len() < 2 {
        return Ok(Vec::new());
    }
    let max_weight = t.max_weight();
    let target_key = t.canonicalize().canonical_key();
    let target = t.distance_matrix();
    let n = names.len();
    let flat: Vec<Weight> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| target.get(i, j)).collect();
    let shapes: Vec<(Shape, usize)> = rooted_topologies(&names)?
        .into_iter()
        .map(|(tree, root)| (Shape::new(tree), root))
        .collect();
    let found: BTreeMap<String, RootedLabeledTree> = shapes
        .par_iter()
        .flat_map_iter(|(shape, root)| {
            let ranges: Vec<(Weight, Weight)> = shape
                .interior
                .iter()
                .map(|&inner| if inner { (1, max_weight.max(1)) } else { (0, max_weight) })
                .collect();
            let mut hits = Vec::new();
            let mut d = Vec::new();
            for_each_weighting(&ranges, |w| {
                shape.distances(w, &mut d);
                if d != flat {
                    return;
                }
                let tree = shape.with_weights(w);
                if tree.canonicalize().canonical_key() == target_key {
                    hits.push(RootedLabeledTree::new(tree, *root).expect("the root is interior"));
                }
            });
            hits
        })
        .map(|r| (r.canonical_key(), r))
        .collect();
    Ok(found.into_values().collect())
}

/// Oriented graphs explained for `k` by every rooted canonical tree within
/// `budget`, enumerated from rooted topologies directly.
pub fn rooted_explainable_set_exhaustive(budget: &EnumerationBudget, k: Weight) -> Result<OrientedSet, OracleError> {
    budget.check(k)?;
    let mut classes = BTreeMap::from([(1, BTreeSet::from([0]))]);
    for n in 2..=budget.max_leaves {
        let shapes: Vec<(Shape, usize)> = rooted_topologies(&default_names(n))?
            .into_iter()
            .map(|(tree, root)| (Shape::new(tree), root))
            .collect();
        let labeled: HashSet<u64> = shapes
            .par_iter()
            .map(|(shape, root)| {
                let ranges: Vec<(Weight, Weight)> = shape
                    .interior
                    .iter()
                    .map(|&inner| if inner { (1, budget.max_weight.max(1)) } else { (0, budget.max_weight) })
                    .collect();
                let mut found = HashSet::new();
                let mut d = Vec::new();
                for_each_weighting(&ranges, |w| {
                    shape.distances(w, &mut d);
                    if budget.zero_discrete_only && d.contains(&0) {
                        return;
                    }
                    let r = RootedLabeledTree::new(shape.with_weights(w), *root).expect("the root is interior");
                    found.insert(oriented_code(&r.directed_explain(k)));
                });
                found
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        classes.insert(n, collect_oriented(n, labeled));
    }
    Ok(OrientedSet { k, classes })
}

/// Every labelled graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
    (0..1u64 << pair_count(n)).map(move |c| graph_from_code(n, c))
}

/// Every labelled oriented graph on `n` vertices.
pub fn all_oriented_graphs(n: usize) -> impl Iterator<Item = OrientedGraph> {
    assert!(n <= 6, "at most 6 vertices");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = 3u64.pow(pairs.len() as u32);
    (0..total).map(move |mut c| {
        let mut arcs = Vec::new();
        for &(i, j) in &pairs {
            match c % 3 {
                1 => arcs.push((i, j)),
                2 => arcs.push((j, i)),
                _ => {}
            }
            c /= 3;
        }
        OrientedGraph::from_arcs(n, arcs).expect("one arc per pair at most")
    })
}

/// Whether every component of the false-twin quotient is a block graph.
pub fn quotient_is_block_graph(g: &Graph) -> bool {
    let p = g.false_twin_partition();
    g.quotient(&p).expect("twin partition of g").is_block_graph()
}

/// Whether the false-twin quotient of `g` is a forest.
pub fn quotient_is_forest(g: &Graph) -> bool {
    let p = g.false_twin_partition();
    g.quotient(&p).expect("twin partition of g").is_forest()
}

/// Oriented forest (underlying graph acyclic) in which no vertex has two
/// in-neighbours.
pub fn is_out_forest(d: &OrientedGraph) -> bool {
    d.underlying().is_forest() && (0..d.n()).all(|v| d.in_neighbors(v).len() <= 1)
}

/// The point-determining quotient of `d` is an out-forest.
pub fn quotient_is_out_forest(d: &OrientedGraph) -> bool {
    let p = d.twin_partition();
    is_out_forest(&d.quotient(&p).expect("twin partition of d"))
}

/// A graph where the enumeration and the characterisation disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    /// The graph in edge-list text format.
    pub graph: String,
    pub explainable: bool,
    pub predicted: bool,
}

/// Comparison for all labelled graphs on `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub n: usize,
    pub labeled: usize,
    pub explainable: usize,
    pub predicted: usize,
    pub isomorphism_classes: usize,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterizationReport {
    pub k: Weight,
    pub budget: EnumerationBudget,
    pub undirected: Vec<LevelReport>,
    pub oriented: Vec<LevelReport>,
}

impl CharacterizationReport {
    pub fn discrepancy_count(&self) -> usize {
        self.undirected
            .iter()
            .chain(&self.oriented)
            .map(|l| l.discrepancies.len())
            .sum()
    }
}

impl fmt::Display for CharacterizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.budget;
        writeln!(
            f,
            "k={} max_leaves={} max_weight={} canonical_only={} zero_discrete_only={}",
            self.k, b.max_leaves, b.max_weight, b.canonical_only, b.zero_discrete_only
        )?;
        for (kind, levels) in [("undirected", &self.undirected), ("oriented", &self.oriented)] {
            for l in levels {
                writeln!(
                    f,
                    "{kind} n={} labeled={} explainable={} predicted={} classes={} discrepancies={}",
                    l.n,
                    l.labeled,
                    l.explainable,
                    l.predicted,
                    l.isomorphism_classes,
                    l.discrepancies.len()
                )?;
                for d in &l.discrepancies {
                    writeln!(f, "# explainable={} predicted={}", d.explainable, d.predicted)?;
                    write!(f, "{}", d.graph)?;
                }
            }
        }
        Ok(())
    }
}

/// Compares the enumerated graphs with the characterisation for every
/// labelled graph within the budget:
///
/// * `k = 1` with discrete zero relation: forests;
/// * `k = 1`: graphs whose twin quotient is a forest;
/// * `k = 2` with discrete zero relation: block graphs;
/// * `k = 2`: graphs whose twin quotient is a block graph.
///
/// For `k = 2` the rooted trees are compared as well, against out-forests
/// (discrete) or graphs whose twin quotient is an out-forest.
pub fn check_characterization(budget: &EnumerationBudget, k: Weight) -> Result<CharacterizationReport, OracleError> {
    budget.check(k)?;
    if k > 2 {
        return Err(OracleError::UnsupportedK(k));
    }
    let set = explainable_set(budget, k)?;
    let predict = |g: &Graph| match (k, budget.zero_discrete_only) {
        (1, true) => g.is_forest(),
        (1, false) => quotient_is_forest(g),
        (_, true) => g.is_block_graph(),
        _ => quotient_is_block_graph(g),
    };
    let mut undirected = Vec::new();
    for n in 1..=budget.max_leaves {
        let rows: Vec<(Graph, bool, bool)> = all_graphs(n)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|g| {
                let (e, p) = (set.contains(&g), predict(&g));
                (g, e, p)
            })
            .collect();
        undirected.push(level_report(n, set.class_count(n), rows.into_iter().map(|(g, e, p)| (g.to_text(), e, p))));
    }

    let mut oriented = Vec::new();
    if k == 2 {
        let rooted = rooted_explainable_set(budget, k)?;
        let predict = |d: &OrientedGraph| {
            if budget.zero_discrete_only {
                is_out_forest(d)
            } else {
                quotient_is_out_forest(d)
            }
        };
        for n in 1..=budget.max_leaves.min(5) {
            let rows: Vec<(String, bool, bool)> = all_oriented_graphs(n)
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|d| (d.to_text(), rooted.contains(&d), predict(&d)))
                .collect();
            oriented.push(level_report(n, rooted.class_count(n), rows.into_iter()));
        }
    }
    Ok(CharacterizationReport {
        k,
        budget: *budget,
        undirected,
        oriented,
    })
}

fn level_report(n: usize, classes: usize, rows: impl Iterator<Item = (String, bool, bool)>) -> LevelReport {
    let mut report = LevelReport {
        n,
        labeled: 0,
        explainable: 0,
        predicted: 0,
        isomorphism_classes: classes,
        discrepancies: Vec::new(),
    };
    for (graph, explainable, predicted) in rows {
        report.labeled += 1;
        report.explainable += usize::from(explainable);
        report.predicted += usize::from(predicted);
        if explainable != predicted {
            report.discrepancies.push(Discrepancy {
                graph,
                explainable,
                predicted,
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    /// Unrooted phylogenetic trees on `n` leaves equal rooted ones on
    /// `n - 1` leaves; those follow from splitting the leaf set into the
    /// root's child blocks.
    fn unrooted_count(n: usize) -> u64 {
        let m = n.saturating_sub(1).max(1);
        let binom = |a: usize, b: usize| (0..b).fold(1u64, |acc, i| acc * (a - i) as u64 / (i + 1) as u64);
        let mut rooted = vec![0u64; m + 1];
        let mut forests = vec![0u64; m + 1];
        forests[0] = 1;
        for s in 1..=m {
            let smaller: u64 = (1..s).map(|j| binom(s - 1, j - 1) * rooted[j] * forests[s - j]).sum();
            rooted[s] = if s == 1 { 1 } else { smaller };
            forests[s] = smaller + rooted[s];
        }
        rooted[m]
    }

    #[test]
    fn topology_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_topologies(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 4, 26, 236]);
        for n in 3..=6 {
            assert_eq!(counts[n - 1] as u64, unrooted_count(n));
        }
        assert_eq!(unrooted_count(7), 2752);
        assert_eq!(enumerate_topologies(0), Err(OracleError::LeafCount(0)));
        assert_eq!(enumerate_topologies(8), Err(OracleError::LeafCount(8)));
        for t in enumerate_topologies(5).unwrap() {
            assert!(t.is_canonical());
            assert!((0..t.node_count()).all(|v| t.is_leaf(v) || t.degree(v) >= 3));
        }
    }

    #[test]
    fn four_vertices_with_discrete_zero() {
        let budget = EnumerationBudget {
            max_leaves: 4,
            zero_discrete_only: true,
            ..EnumerationBudget::for_k(2)
        };
        let set = explainable_set(&budget, 2).unwrap();
        for g in [path(4), star(3), complete(4), paw()] {
            assert!(set.contains(&g), "{}", g.to_text());
        }
        assert!(!set.contains(&cycle(4)));
        assert!(!set.contains(&diamond()));
        let missing = set.non_members(4);
        assert_eq!(missing.len(), 2);
        assert!(missing.iter().any(|g| g.is_isomorphic_to(&cycle(4))));
        assert!(missing.iter().any(|g| g.is_isomorphic_to(&diamond())));

        let all = explainable_set(&EnumerationBudget { max_leaves: 4, ..EnumerationBudget::for_k(2) }, 2).unwrap();
        assert!(all.contains(&cycle(4)));
        assert!(all.contains(&diamond()));
    }

    #[test]
    fn unique_witnesses() {
        let budget = EnumerationBudget::for_k(2);
        let k3 = all_witnesses(&complete(3), &budget, 2).unwrap();
        assert_eq!(k3.len(), 1);
        assert!(k3[0].edges().iter().all(|&(_, _, w)| w == 1));
        assert_eq!(all_witnesses(&path(4), &budget, 2).unwrap().len(), 1);
        assert!(all_witnesses(&cycle(5), &budget, 2).unwrap().is_empty());
        assert_eq!(
            all_witnesses(&path(6), &budget, 2),
            Err(OracleError::OverBudget { got: 6, max: 5 })
        );
    }

    #[test]
    fn small_rooted_sets() {
        let budget = EnumerationBudget {
            max_leaves: 3,
            zero_discrete_only: true,
            ..EnumerationBudget::for_k(2)
        };
        let set = rooted_explainable_set(&budget, 2).unwrap();
        let in_star = OrientedGraph::from_arcs(3, [(0, 1), (2, 1)]).unwrap();
        assert!(!set.contains(&in_star));
        for d in all_oriented_graphs(3) {
            assert_eq!(set.contains(&d), is_out_forest(&d), "{}", d.to_text());
        }
    }

    #[test]
    fn rootings_of_a_star() {
        let s = LabeledTree::star((0..3).map(|i| (i.to_string(), 1))).unwrap();
        let brute = brute_force_rootings(&s).unwrap();
        let alg = enumerate_rooted(&s, LeafRooting::Corrected).unwrap();
        assert_eq!(brute.len(), 4);
        let keys: BTreeSet<String> = alg.iter().map(RootedLabeledTree::canonical_key).collect();
        assert_eq!(keys, brute.iter().map(RootedLabeledTree::canonical_key).collect());
    }

    #[test]
    fn k_one_gives_forests_up_to_twins() {
        let budget = EnumerationBudget::for_k(1);
        let small = explainable_set(&EnumerationBudget { max_leaves: 3, ..budget }, 1).unwrap();
        for n in 1..=3 {
            for g in all_graphs(n) {
                assert_eq!(small.contains(&g), g.is_forest(), "{}", g.to_text());
            }
        }
        let report = check_characterization(&budget, 1).unwrap();
        assert_eq!(report.discrepancy_count(), 0, "{report}");
        assert!(report.oriented.is_empty());
        let discrete = EnumerationBudget {
            zero_discrete_only: true,
            ..budget
        };
        assert_eq!(check_characterization(&discrete, 1).unwrap().discrepancy_count(), 0);
        // two pairs of twins at weights 0 and 1 around one hub
        let set = explainable_set(&EnumerationBudget { max_leaves: 4, ..budget }, 1).unwrap();
        assert!(set.contains(&cycle(4)));
        assert_eq!(check_characterization(&budget, 3), Err(OracleError::UnsupportedK(3)));
    }
}
