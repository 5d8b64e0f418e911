use std::collections::BTreeSet;

use super::Graph;

/// Maximal 2-connected subgraphs (and bridges) of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Vertex sets of the blocks, in depth-first discovery order.
    pub blocks: Vec<BTreeSet<usize>>,
    /// Vertices lying in two or more blocks.
    pub cut_vertices: BTreeSet<usize>,
}

impl BlockDecomposition {
    pub fn blocks_containing(&self, v: usize) -> impl Iterator<Item = &BTreeSet<usize>> {
        self.blocks.iter().filter(move |b| b.contains(&v))
    }
}

struct Frame {
    vertex: usize,
    parent: Option<usize>,
    next: usize,
}

/// Hopcroft-Tarjan with an explicit edge stack, iterative so deep paths
/// cannot overflow the call stack. Isolated vertices produce no block.
pub(super) fn block_decomposition(g: &Graph) -> BlockDecomposition {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut blocks = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX || adj[root].is_empty() {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut stack = vec![Frame {
            vertex: root,
            parent: None,
            next: 0,
        }];

        while let Some(top) = stack.last_mut() {
            let v = top.vertex;
            if top.next < adj[v].len() {
                let w = adj[v][top.next];
                top.next += 1;
                if disc[w] == usize::MAX {
                    edges.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push(Frame {
                        vertex: w,
                        parent: Some(v),
                        next: 0,
                    });
                } else if Some(w) != top.parent && disc[w] < disc[v] {
                    edges.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
                continue;
            }

            let finished = stack.pop().expect("non-empty");
            let Some(u) = finished.parent else { continue };
            low[u] = low[u].min(low[v]);
            if low[v] >= disc[u] {
                let mut block = BTreeSet::new();
                while let Some((a, b)) = edges.pop() {
                    block.insert(a);
                    block.insert(b);
                    if (a, b) == (u, v) {
                        break;
                    }
                }
                blocks.push(block);
            }
        }
    }

    let mut count = vec![0usize; n];
    for b in &blocks {
        for &v in b {
            count[v] += 1;
        }
    }
    let cut_vertices = (0..n).filter(|&v| count[v] >= 2).collect();
    BlockDecomposition {
        blocks,
        cut_vertices,
    }
}
