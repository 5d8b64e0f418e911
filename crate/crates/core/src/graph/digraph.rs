use std::borrow::Cow;
use std::collections::BTreeSet;

use super::{format, is_valid_name, Graph, GraphError, TwinPartition};

/// A digraph without loops or 2-cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedGraph {
    out: Vec<BTreeSet<usize>>,
    inc: Vec<BTreeSet<usize>>,
    names: Option<Vec<String>>,
}

impl OrientedGraph {
    pub fn empty(n: usize) -> Self {
        OrientedGraph {
            out: vec![BTreeSet::new(); n],
            inc: vec![BTreeSet::new(); n],
            names: None,
        }
    }

    /// Builds from ordered pairs `(tail, head)`. Repeated arcs collapse;
    /// an arc together with its reverse is rejected.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = OrientedGraph::empty(n);
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if d.out[v].contains(&u) {
                return Err(GraphError::Antiparallel(u, v));
            }
            d.out[u].insert(v);
            d.inc[v].insert(u);
        }
        Ok(d)
    }

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
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(BTreeSet::len).sum()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out.get(u).is_some_and(|o| o.contains(&v))
    }

    pub fn out_neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.inc[v]
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, o)| o.iter().map(move |&v| (u, v)))
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

    pub fn has_default_names(&self) -> bool {
        self.names.is_none()
    }

    /// Forgets arc directions.
    pub fn underlying(&self) -> Graph {
        let g = Graph::from_edge_list(self.n(), self.arcs()).expect("arcs are valid edges");
        g.with_names(self.names()).expect("names already validated")
    }

    /// Classes of vertices with identical in- and out-neighbourhoods.
    pub fn twin_partition(&self) -> TwinPartition {
        TwinPartition::group_by_key(self.n(), |v| (self.inc[v].clone(), self.out[v].clone()))
    }

    pub fn induced_subgraph(&self, vertices: &BTreeSet<usize>) -> Result<OrientedGraph, GraphError> {
        if let Some(&bad) = vertices.iter().find(|&&v| v >= self.n()) {
            return Err(GraphError::UnknownVertex {
                vertex: bad,
                n: self.n(),
            });
        }
        let order: Vec<usize> = vertices.iter().copied().collect();
        let index = |v: usize| order.binary_search(&v).ok();
        let arcs: Vec<(usize, usize)> = self
            .arcs()
            .into_iter()
            .filter_map(|(u, v)| Some((index(u)?, index(v)?)))
            .collect();
        OrientedGraph::from_arcs(order.len(), arcs)?
            .with_names(order.iter().map(|&v| self.name(v).into_owned()))
    }

    /// The point-determining quotient, induced on class representatives.
    pub fn quotient(&self, partition: &TwinPartition) -> Result<OrientedGraph, GraphError> {
        if *partition != self.twin_partition() {
            return Err(GraphError::InconsistentPartition(
                "classes differ from the in/out-neighbourhood classes".into(),
            ));
        }
        self.induced_subgraph(&partition.representatives())
    }

    pub fn to_text(&self) -> String {
        format::write_oriented(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_two_cycles() {
        assert_eq!(
            OrientedGraph::from_arcs(2, [(0, 1), (1, 0)]),
            Err(GraphError::Antiparallel(1, 0))
        );
        assert_eq!(OrientedGraph::from_arcs(2, [(0, 1), (0, 1)]).unwrap().arc_count(), 1);
    }

    #[test]
    fn directed_twins_need_both_neighbourhoods() {
        // 0 -> 2 <- 1 : 0 and 1 are twins
        let d = OrientedGraph::from_arcs(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(d.twin_partition().classes(), &[vec![0, 1], vec![2]]);
        // 0 -> 1 -> 2 : no twins although 0 and 2 share the undirected neighbour 1
        let d = OrientedGraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(d.twin_partition().is_discrete());
        assert_eq!(d.underlying().false_twin_partition().classes(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn quotient_of_in_star() {
        let d = OrientedGraph::from_arcs(3, [(0, 2), (1, 2)]).unwrap();
        let q = d.quotient(&d.twin_partition()).unwrap();
        assert_eq!(q.arcs(), vec![(0, 1)]);
        assert_eq!(q.names(), vec!["0", "2"]);
    }
}
