//! Bit codes for small graphs and their isomorphism-invariant minima.

use crate::graph::{Graph, OrientedGraph};

pub(crate) const MAX_VERTICES: usize = 8;

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub(crate) fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Bit `pair_index(i, j)` set for every edge.
pub(crate) fn graph_code(g: &Graph) -> u64 {
    let n = g.n();
    g.edges().iter().fold(0, |acc, &(u, v)| acc | 1 << pair_index(n, u, v))
}

pub(crate) fn graph_from_code(n: usize, code: u64) -> Graph {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    Graph::from_edge_list(n, edges.filter(|&(i, j)| code >> pair_index(n, i, j) & 1 == 1))
        .expect("codes only hold valid pairs")
}

/// Bit `i * (n - 1) + (j adjusted)` set for every arc `i -> j`.
fn arc_index(n: usize, i: usize, j: usize) -> usize {
    i * (n - 1) + if j > i { j - 1 } else { j }
}

pub(crate) fn oriented_code(d: &OrientedGraph) -> u64 {
    let n = d.n();
    d.arcs().iter().fold(0, |acc, &(u, v)| acc | 1 << arc_index(n, u, v))
}

pub(crate) fn oriented_from_code(n: usize, code: u64) -> OrientedGraph {
    let arcs = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
    OrientedGraph::from_arcs(n, arcs.filter(|&(i, j)| code >> arc_index(n, i, j) & 1 == 1))
        .expect("codes only hold valid arcs")
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("a larger element exists");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

/// Smallest code over all relabellings; equal exactly for isomorphic
/// graphs.
pub(crate) fn canonical_graph_code(n: usize, code: u64, perms: &[Vec<usize>]) -> u64 {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| code >> pair_index(n, i, j) & 1 == 1)
        .collect();
    perms
        .iter()
        .map(|p| edges.iter().fold(0u64, |acc, &(i, j)| acc | 1 << pair_index(n, p[i], p[j])))
        .min()
        .unwrap_or(0)
}

pub(crate) fn canonical_oriented_code(n: usize, code: u64, perms: &[Vec<usize>]) -> u64 {
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .filter(|&(i, j)| code >> arc_index(n, i, j) & 1 == 1)
        .collect();
    perms
        .iter()
        .map(|p| arcs.iter().fold(0u64, |acc, &(i, j)| acc | 1 << arc_index(n, p[i], p[j])))
        .min()
        .unwrap_or(0)
}
