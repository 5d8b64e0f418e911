use std::collections::{BTreeMap, BTreeSet};

use super::{Graph, GraphError};

/// A partition of the vertex set into twin classes.
///
/// Classes are sorted by their smallest member, which is also the class
/// representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwinPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl TwinPartition {
    /// Groups vertices `0..n` by key. Vertices with equal keys share a class.
    pub(crate) fn group_by_key<K: Ord>(n: usize, key: impl Fn(usize) -> K) -> Self {
        let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(key(v)).or_default().push(v);
        }
        let mut classes: Vec<Vec<usize>> = groups.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        Self::from_classes(n, classes)
    }

    fn from_classes(n: usize, classes: Vec<Vec<usize>>) -> Self {
        let mut class_of = vec![usize::MAX; n];
        for (i, class) in classes.iter().enumerate() {
            for &v in class {
                class_of[v] = i;
            }
        }
        TwinPartition { classes, class_of }
    }

    /// Builds a partition from arbitrary classes, normalising their order.
    /// Classes must be non-empty, disjoint and cover `0..n`.
    pub fn new(n: usize, classes: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut seen = vec![false; n];
        let mut normalised = Vec::with_capacity(classes.len());
        for mut class in classes {
            if class.is_empty() {
                return Err(GraphError::InconsistentPartition("empty class".into()));
            }
            class.sort_unstable();
            for &v in &class {
                if v >= n {
                    return Err(GraphError::UnknownVertex { vertex: v, n });
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(GraphError::InconsistentPartition(format!(
                        "vertex {v} is in two classes"
                    )));
                }
            }
            normalised.push(class);
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(GraphError::InconsistentPartition(format!(
                "vertex {v} is in no class"
            )));
        }
        normalised.sort_by_key(|c| c[0]);
        Ok(Self::from_classes(n, normalised))
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    /// Smallest vertex id of class `i`.
    pub fn representative(&self, i: usize) -> usize {
        self.classes[i][0]
    }

    pub fn representatives(&self) -> BTreeSet<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    /// Every class is a single vertex.
    pub fn is_discrete(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }
}

pub(super) fn false_twin_partition(g: &Graph) -> TwinPartition {
    TwinPartition::group_by_key(g.n(), |v| g.neighbors(v).clone())
}

pub(super) fn quotient(g: &Graph, partition: &TwinPartition) -> Result<Graph, GraphError> {
    if *partition != false_twin_partition(g) {
        return Err(GraphError::InconsistentPartition(
            "classes differ from the open-neighbourhood classes".into(),
        ));
    }
    g.induced_subgraph(&partition.representatives())
}
