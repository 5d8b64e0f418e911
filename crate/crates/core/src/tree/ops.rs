use std::collections::{BTreeMap, BTreeSet};

use super::{LabeledTree, TreeBuilder, TreeError};

impl LabeledTree {
    /// The tree displayed on a subset of leaves: everything off the paths
    /// between kept leaves is pruned, then every interior vertex of degree
    /// 2 is suppressed and its two edge weights summed.
    pub fn restrict<S: AsRef<str>>(
        &self,
        leaf_names: impl IntoIterator<Item = S>,
    ) -> Result<LabeledTree, TreeError> {
        let mut keep = BTreeSet::new();
        for name in leaf_names {
            let name = name.as_ref();
            let v = self
                .leaf_by_name(name)
                .ok_or_else(|| TreeError::UnknownLeaf(name.to_owned()))?;
            keep.insert(v);
        }
        if keep.is_empty() {
            return Err(TreeError::EmptyRestriction);
        }
        Ok(self.prune_and_smooth(&keep))
    }

    fn prune_and_smooth(&self, keep: &BTreeSet<usize>) -> LabeledTree {
        let n = self.node_count();
        let mut alive = vec![true; n];
        let mut degree: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut queue: Vec<usize> = (0..n)
            .filter(|&v| degree[v] <= 1 && !keep.contains(&v))
            .collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &(w, _) in self.neighbors(v) {
                if alive[w] {
                    degree[w] -= 1;
                    if degree[w] <= 1 && !keep.contains(&w) {
                        queue.push(w);
                    }
                }
            }
        }

        let suppressed = |v: usize| alive[v] && !self.is_leaf(v) && degree[v] == 2;
        let mut b = TreeBuilder::new();
        let mut index = BTreeMap::new();
        for v in (0..n).filter(|&v| alive[v] && !suppressed(v)) {
            index.insert(v, b.node(self.node(v).clone()));
        }
        for (&u, &new_u) in &index {
            for &(first, w0) in self.neighbors(u) {
                if !alive[first] {
                    continue;
                }
                let (mut prev, mut cur, mut total) = (u, first, w0);
                while suppressed(cur) {
                    let &(next, w) = self
                        .neighbors(cur)
                        .iter()
                        .find(|&&(x, _)| x != prev && alive[x])
                        .expect("suppressed vertices have two live neighbours");
                    total += w;
                    prev = cur;
                    cur = next;
                }
                if u < cur {
                    b.edge(new_u, index[&cur], total);
                }
            }
        }
        b.build().expect("pruning and smoothing preserve tree structure")
    }

    /// Removes dangling interior vertices and suppresses degree-2 interior
    /// vertices, keeping every leaf.
    pub fn smooth(&self) -> LabeledTree {
        let leaves: BTreeSet<usize> = (0..self.node_count()).filter(|&v| self.is_leaf(v)).collect();
        if leaves.is_empty() {
            return self.clone();
        }
        self.prune_and_smooth(&leaves)
    }

    /// Smooths degree-2 paths, then contracts every interior 0-edge. The
    /// result is phylogenetic, has no interior 0-edge and explains the
    /// same graph as `self` for every `k`.
    pub fn canonicalize(&self) -> LabeledTree {
        let smoothed = self.smooth();
        let n = smoothed.node_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], v: usize) -> usize {
            let mut r = v;
            while parent[r] != r {
                r = parent[r];
            }
            let mut v = v;
            while parent[v] != r {
                let next = parent[v];
                parent[v] = r;
                v = next;
            }
            r
        }
        for (u, v, w) in smoothed.edges() {
            if w == 0 && smoothed.is_interior_edge(u, v) {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
        let mut b = TreeBuilder::new();
        let mut index = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            if let std::collections::btree_map::Entry::Vacant(slot) = index.entry(r) {
                slot.insert(b.node(smoothed.node(r).clone()));
            }
        }
        for (u, v, w) in smoothed.edges() {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                b.edge(index[&ru], index[&rv], w);
            }
        }
        b.build()
            .expect("contracting edges of a tree yields a tree")
            .smooth()
    }

    /// Phylogenetic (interior degree at least 3) with positive weights on
    /// all interior edges.
    pub fn is_canonical(&self) -> bool {
        (0..self.node_count()).all(|v| self.is_leaf(v) || self.degree(v) >= 3)
            && self
                .edges()
                .iter()
                .all(|&(u, v, w)| w > 0 || !self.is_interior_edge(u, v))
    }

    /// Contracts the interior edge `u`-`v`, keeping all other weights.
    /// Leaf edges cannot be contracted since leaves are the graph vertices.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<LabeledTree, TreeError> {
        if self.weight(u, v).is_none() {
            return Err(TreeError::NoSuchEdge(u, v));
        }
        if !self.is_interior_edge(u, v) {
            return Err(TreeError::LeafEdge(u, v));
        }
        let (keep, gone) = (u.min(v), u.max(v));
        let mut b = TreeBuilder::new();
        let mut index = vec![usize::MAX; self.node_count()];
        for x in (0..self.node_count()).filter(|&x| x != gone) {
            index[x] = b.node(self.node(x).clone());
        }
        index[gone] = index[keep];
        for (x, y, w) in self.edges() {
            if (x, y) != (keep, gone) {
                b.edge(index[x], index[y], w);
            }
        }
        b.build()
    }
}

#[cfg(test)]
mod tests {
    use crate::tree::{LabeledTree, TreeBuilder, TreeError};

    fn two_leaf_path(weights: &[u64]) -> LabeledTree {
        let mut b = TreeBuilder::new();
        let mut prev = b.leaf("a");
        for (i, &w) in weights.iter().enumerate() {
            let next = if i + 1 == weights.len() { b.leaf("b") } else { b.interior() };
            b.edge(prev, next, w);
            prev = next;
        }
        b.build().unwrap()
    }

    #[test]
    fn degree_two_paths_collapse() {
        let c = two_leaf_path(&[1, 0, 1]).canonicalize();
        assert_eq!(c.node_count(), 2);
        assert_eq!(c.edges(), vec![(0, 1, 2)]);
        assert!(c.is_canonical());
    }

    #[test]
    fn two_leaf_trees_are_canonical() {
        assert!(two_leaf_path(&[0]).is_canonical());
        assert!(two_leaf_path(&[5]).is_canonical());
        assert!(LabeledTree::single_leaf("a").unwrap().is_canonical());
    }

    #[test]
    fn interior_zero_edge_is_contracted() {
        // S4 with its centre split by a 0-edge
        let mut b = TreeBuilder::new();
        let (p, q) = (b.interior(), b.interior());
        for (name, hub) in [("a", p), ("b", p), ("c", q), ("d", q)] {
            let l = b.leaf(name);
            b.edge(hub, l, 1);
        }
        b.edge(p, q, 0);
        let t = b.build().unwrap();
        assert!(!t.is_canonical());
        let c = t.canonicalize();
        assert!(c.is_canonical());
        assert_eq!(c.canonical_key(), LabeledTree::star([("a", 1), ("b", 1), ("c", 1), ("d", 1)]).unwrap().canonical_key());
        assert_eq!(c.canonicalize(), c);
    }

    #[test]
    fn restriction_sums_weights() {
        // ((a:2,b:0)p:2,(c:0,d:2)q) restricted to a, c, d
        let mut b = TreeBuilder::new();
        let (p, q) = (b.interior(), b.interior());
        let l: Vec<usize> = ["a", "b", "c", "d"].iter().map(|s| b.leaf(*s)).collect();
        b.edge(p, l[0], 2).edge(p, l[1], 0).edge(p, q, 2).edge(q, l[2], 0).edge(q, l[3], 2);
        let t = b.build().unwrap();
        let r = t.restrict(["a", "c", "d"]).unwrap();
        assert_eq!(r.node_count(), 4);
        let d = r.distance_matrix();
        assert_eq!(d.by_name("a", "c"), Some(4));
        assert_eq!(d.by_name("c", "d"), Some(2));
        let a = r.leaf_by_name("a").unwrap();
        assert_eq!(r.neighbors(a)[0].1, 4);

        let one = t.restrict(["b"]).unwrap();
        assert_eq!(one.node_count(), 1);
        assert_eq!(t.restrict(["z"]), Err(TreeError::UnknownLeaf("z".into())));
        assert_eq!(t.restrict(Vec::<String>::new()), Err(TreeError::EmptyRestriction));
        assert_eq!(t.restrict(["a", "b", "c", "d"]).unwrap().canonical_key(), t.canonical_key());
    }

    #[test]
    fn contraction_rules() {
        let mut b = TreeBuilder::new();
        let (p, q) = (b.interior(), b.interior());
        for (name, hub) in [("a", p), ("b", p), ("c", q), ("d", q)] {
            let l = b.leaf(name);
            b.edge(hub, l, 1);
        }
        b.edge(p, q, 2);
        let t = b.build().unwrap();
        let c = t.contract_edge(p, q).unwrap();
        assert_eq!(c.node_count(), 5);
        assert_eq!(c.explain(2).edge_count(), 6);
        assert_eq!(t.contract_edge(p, 2), Err(TreeError::LeafEdge(p, 2)));
        assert_eq!(t.contract_edge(2, 3), Err(TreeError::NoSuchEdge(2, 3)));
    }
}
