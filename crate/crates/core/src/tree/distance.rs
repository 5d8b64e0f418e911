use super::{LabeledTree, TreeError, Weight};
use crate::graph::Graph;

/// Path weights between all leaf pairs, rows ordered like
/// [`LabeledTree::leaves`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    names: Vec<String>,
    entries: Vec<Vec<Weight>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, i: usize, j: usize) -> Weight {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[Weight] {
        &self.entries[i]
    }

    pub fn by_name(&self, a: &str, b: &str) -> Option<Weight> {
        let i = self.names.iter().position(|s| s == a)?;
        let j = self.names.iter().position(|s| s == b)?;
        Some(self.entries[i][j])
    }
}

impl LabeledTree {
    /// Weighted distances from `source` to every vertex.
    pub(crate) fn distances_from(&self, source: usize) -> Vec<Weight> {
        let mut dist = vec![Weight::MAX; self.node_count()];
        dist[source] = 0;
        let mut stack = vec![source];
        while let Some(u) = stack.pop() {
            for &(v, w) in self.neighbors(u) {
                if dist[v] == Weight::MAX {
                    dist[v] = dist[u] + w;
                    stack.push(v);
                }
            }
        }
        dist
    }

    /// One traversal per leaf.
    pub fn distance_matrix(&self) -> DistanceMatrix {
        let leaves = self.leaves();
        let entries = leaves
            .iter()
            .map(|&x| {
                let dist = self.distances_from(x);
                leaves.iter().map(|&y| dist[y]).collect()
            })
            .collect();
        DistanceMatrix {
            names: leaves.iter().map(|&v| self.leaf_name(v).to_owned()).collect(),
            entries,
        }
    }

    /// The graph on the leaves whose edges are the pairs at path weight
    /// exactly `k`. Vertex `i` is the `i`-th leaf in name order.
    pub fn explain(&self, k: Weight) -> Graph {
        self.explain_with(|d| d == k)
    }

    pub(crate) fn explain_with(&self, related: impl Fn(Weight) -> bool) -> Graph {
        let d = self.distance_matrix();
        let n = d.len();
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        let g = Graph::from_edge_list(n, pairs.filter(|&(i, j)| related(d.get(i, j))))
            .expect("leaf pairs are valid edges");
        g.with_names(d.names.iter().cloned()).expect("leaf names are valid and unique")
    }

    /// No two distinct leaves are at path weight 0.
    pub fn is_zero_discrete(&self) -> bool {
        let d = self.distance_matrix();
        (0..d.len()).all(|i| (i + 1..d.len()).all(|j| d.get(i, j) > 0))
    }

    /// Multiplies every weight by `factor`.
    pub fn scale(&self, factor: Weight) -> Result<LabeledTree, TreeError> {
        if factor == 0 {
            return Err(TreeError::ZeroScale);
        }
        let mut out = self.clone();
        for list in &mut out.adj {
            for (_, w) in list.iter_mut() {
                *w = w.checked_mul(factor).ok_or(TreeError::Overflow)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::tree::TreeBuilder;

    #[test]
    fn star_distances() {
        let k3 = LabeledTree::star([("x1", 1), ("x2", 1), ("x3", 1)]).unwrap();
        let d = k3.distance_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.get(i, j), if i == j { 0 } else { 2 });
            }
        }
        let p3 = LabeledTree::star([("x1", 2), ("x2", 2), ("x3", 0)]).unwrap();
        let d = p3.distance_matrix();
        assert_eq!(d.by_name("x1", "x2"), Some(4));
        assert_eq!(d.by_name("x1", "x3"), Some(2));
        assert_eq!(d.by_name("x2", "x3"), Some(2));
    }

    #[test]
    fn single_leaf_matrix() {
        let t = LabeledTree::single_leaf("a").unwrap();
        let d = t.distance_matrix();
        assert_eq!(d.len(), 1);
        assert_eq!(d.get(0, 0), 0);
        assert!(t.is_zero_discrete());
        assert_eq!(t.explain(2).n(), 1);
    }

    #[test]
    fn explains_k3_and_p3() {
        let k3 = LabeledTree::star([("x1", 1), ("x2", 1), ("x3", 1)]).unwrap();
        assert!(k3.explain(2).is_complete());
        let p3 = LabeledTree::star([("x1", 2), ("x2", 2), ("x3", 0)]).unwrap();
        let g = p3.explain(2);
        assert_eq!(g.edges(), vec![(0, 2), (1, 2)]);
        assert_eq!(g.name(2), "x3");
    }

    #[test]
    fn caterpillar_explains_p5() {
        // leaves 1..5; spine p-q-r; ends on 2-edges, inner leaves on 0-edges
        let mut b = TreeBuilder::new();
        let l: Vec<usize> = (1..=5).map(|i| b.leaf(i.to_string())).collect();
        let (p, q, r) = (b.interior(), b.interior(), b.interior());
        b.edge(l[0], p, 2).edge(l[1], p, 0).edge(p, q, 2).edge(l[2], q, 0);
        b.edge(q, r, 2).edge(l[3], r, 0).edge(l[4], r, 2);
        let t = b.build().unwrap();
        assert_eq!(t.explain(2).edges(), path(5).edges());
    }

    #[test]
    fn scaling() {
        let k3 = LabeledTree::star([("a", 1), ("b", 1), ("c", 1)]).unwrap();
        assert_eq!(k3.scale(1).unwrap(), k3);
        assert!(k3.scale(3).unwrap().explain(6).is_complete());
        assert_eq!(k3.scale(0), Err(TreeError::ZeroScale));
        let big = LabeledTree::star([("a", u64::MAX), ("b", 1)]).unwrap();
        assert_eq!(big.scale(2), Err(TreeError::Overflow));
    }

    #[test]
    fn explained_graph_is_empty_for_large_k() {
        let t = LabeledTree::star([("a", 1), ("b", 2), ("c", 3)]).unwrap();
        assert_eq!(t.explain(100).edge_count(), 0);
    }
}
