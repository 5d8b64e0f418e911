//! Random workloads for the pipeline benchmarks.

use std::collections::BTreeSet;

use nnipcg::{Graph, LabeledTree, TreeBuilder, Weight};
use rand::Rng;

/// A connected block graph grown by gluing `blocks` cliques of size
/// 2..=`max_clique` onto random existing vertices.
pub fn random_block_graph<R: Rng>(rng: &mut R, blocks: usize, max_clique: usize) -> Graph {
    let mut n = 1;
    let mut edges = Vec::new();
    for _ in 0..blocks {
        let size = rng.gen_range(2..=max_clique.max(2));
        let mut clique = vec![rng.gen_range(0..n)];
        for _ in 1..size {
            clique.push(n);
            n += 1;
        }
        for (i, &u) in clique.iter().enumerate() {
            for &v in &clique[i + 1..] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edge_list(n, edges).expect("generated ids are in range")
}

/// Adds `extra` false twins of randomly chosen vertices.
pub fn add_twins<R: Rng>(rng: &mut R, g: &Graph, extra: usize) -> Graph {
    let mut adj: Vec<Vec<usize>> = (0..g.n()).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    for _ in 0..extra {
        let twin = adj.len();
        let original = adj[rng.gen_range(0..twin)].clone();
        for &w in &original {
            adj[w].push(twin);
        }
        adj.push(original);
    }
    let edges = adj.iter().enumerate().flat_map(|(u, a)| a.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
    Graph::from_edge_list(adj.len(), edges).expect("generated ids are in range")
}

/// A random tree on `leaves` leaves named `0..leaves`, built by attaching
/// each new leaf to a random vertex or edge, with weights in
/// `0..=max_weight`.
pub fn random_tree<R: Rng>(rng: &mut R, leaves: usize, max_weight: Weight) -> LabeledTree {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut is_leaf = vec![true; leaves.clamp(1, 2)];
    let mut interior = BTreeSet::new();
    if leaves >= 2 {
        edges.push((0, 1));
    }
    for _ in 2..leaves {
        let leaf = is_leaf.len();
        is_leaf.resize(leaf + 1, true);
        if !interior.is_empty() && rng.gen_bool(0.3) {
            let hub = *interior.iter().nth(rng.gen_range(0..interior.len())).expect("non-empty");
            edges.push((hub, leaf));
        } else {
            let (u, v) = edges.swap_remove(rng.gen_range(0..edges.len()));
            let mid = is_leaf.len();
            is_leaf.push(false);
            interior.insert(mid);
            edges.extend([(u, mid), (mid, v), (mid, leaf)]);
        }
    }
    let mut b = TreeBuilder::new();
    let mut next_name = 0;
    let ids: Vec<usize> = is_leaf
        .iter()
        .map(|&leaf| {
            if leaf {
                next_name += 1;
                b.leaf((next_name - 1).to_string())
            } else {
                b.interior()
            }
        })
        .collect();
    for (u, v) in edges {
        b.edge(ids[u], ids[v], rng.gen_range(0..=max_weight));
    }
    b.build().expect("generated edges form a tree")
}
