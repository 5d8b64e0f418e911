mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use nnipcg::graph::{parse_graph, parse_oriented};
use nnipcg::oracle::{explainable_set, EnumerationBudget, ExplainableSet};
use nnipcg::tree::parse_tree;
use nnipcg::oriented::{construct_oriented, recognize_oriented, verify_oriented};
use nnipcg::{recognize, verify, Graph, OrientedGraph, RootedLabeledTree};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            Graph::from_edge_list(n, pairs.zip(bits).filter(|p| p.1).map(|p| p.0)).unwrap()
        })
    })
}

fn oriented(max_n: usize) -> impl Strategy<Value = OrientedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0u8..3, n * (n - 1) / 2).prop_map(move |states| {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            let arcs = pairs.zip(states).filter_map(|((i, j), s)| match s {
                1 => Some((i, j)),
                2 => Some((j, i)),
                _ => None,
            });
            OrientedGraph::from_arcs(n, arcs).unwrap()
        })
    })
}

fn tree(max_leaves: usize, max_weight: u64) -> impl Strategy<Value = nnipcg::LabeledTree> {
    (any::<u64>(), 1..=max_leaves).prop_map(move |(seed, n)| {
        common::random_tree(&mut ChaCha8Rng::seed_from_u64(seed), n, max_weight)
    })
}

fn explainable_graph() -> impl Strategy<Value = Graph> {
    (any::<u64>(), 1..5usize, 2..5usize, 0..4usize).prop_map(|(seed, blocks, clique, twins)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_block_graph(&mut rng, blocks, clique);
        common::add_twins(&mut rng, &g, twins)
    })
}

fn oracle() -> &'static ExplainableSet {
    static SET: OnceLock<ExplainableSet> = OnceLock::new();
    SET.get_or_init(|| explainable_set(&EnumerationBudget::for_k(2), 2).unwrap())
}

fn induced_cycle_or_diamond(g: &Graph) -> bool {
    let n = g.n();
    (0u32..1 << n).any(|mask| {
        let s: BTreeSet<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if s.len() < 4 {
            return false;
        }
        let h = g.induced_subgraph(&s).unwrap();
        let cycle = h.is_connected() && (0..h.n()).all(|v| h.degree(v) == 2);
        let diamond = h.n() == 4 && h.edge_count() == 5;
        cycle || diamond
    })
}

fn biconnected(g: &Graph, block: &BTreeSet<usize>) -> bool {
    let h = g.induced_subgraph(block).unwrap();
    if !h.is_connected() {
        return false;
    }
    block.len() <= 2
        || block.iter().all(|&v| {
            let rest: BTreeSet<usize> = block.iter().copied().filter(|&u| u != v).collect();
            g.induced_subgraph(&rest).unwrap().is_connected()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn explainable_graphs_are_hereditary(g in explainable_graph(), seed in any::<u64>()) {
        prop_assert!(recognize(&g, 2).unwrap().is_explained());
        let keep = common::random_subset(&mut ChaCha8Rng::seed_from_u64(seed), g.n());
        prop_assume!(!keep.is_empty());
        let h = g.induced_subgraph(&keep).unwrap();
        prop_assert!(recognize(&h, 2).unwrap().is_explained());
    }

    #[test]
    fn recognition_is_sound(g in graph(7)) {
        match recognize(&g, 2).unwrap().witness() {
            Some(t) => {
                prop_assert!(verify(t, &g, 2).unwrap());
                prop_assert!(t.is_canonical());
            }
            None => prop_assert!(!g.quotient(&g.false_twin_partition()).unwrap().is_block_graph()),
        }
    }

    #[test]
    fn recognition_matches_the_oracle(g in graph(5)) {
        prop_assert_eq!(recognize(&g, 2).unwrap().is_explained(), oracle().contains(&g));
    }

    #[test]
    fn witnesses_of_connected_graphs_are_least_resolved(g in explainable_graph()) {
        let outcome = recognize(&g, 2).unwrap();
        let t = outcome.witness().unwrap();
        for (u, v, w) in t.edges() {
            if w > 0 && t.is_interior_edge(u, v) {
                prop_assert!(!verify(&t.contract_edge(u, v).unwrap(), &g, 2).unwrap());
            }
        }
    }

    #[test]
    fn canonicalize_is_idempotent_and_keeps_the_graph(t in tree(8, 3)) {
        let c = t.canonicalize();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(c.canonicalize().to_newick(), c.to_newick());
        for k in 1..=3 {
            prop_assert_eq!(c.explain(k).edges(), t.explain(k).edges());
        }
    }

    #[test]
    fn distances_form_a_tree_metric(t in tree(7, 4)) {
        let d = t.distance_matrix();
        let n = d.len();
        for a in 0..n {
            prop_assert_eq!(d.get(a, a), 0);
            for b in 0..n {
                prop_assert_eq!(d.get(a, b), d.get(b, a));
                for c in 0..n {
                    prop_assert!(d.get(a, c) <= d.get(a, b) + d.get(b, c));
                    for e in 0..n {
                        let mut sums = [
                            d.get(a, b) + d.get(c, e),
                            d.get(a, c) + d.get(b, e),
                            d.get(a, e) + d.get(b, c),
                        ];
                        sums.sort_unstable();
                        prop_assert_eq!(sums[1], sums[2]);
                    }
                }
            }
        }
    }

    #[test]
    fn scaling_commutes_with_explain(t in tree(7, 3), factor in 1u64..4, k in 1u64..4) {
        prop_assert_eq!(t.scale(factor).unwrap().explain(factor * k).edges(), t.explain(k).edges());
    }

    #[test]
    fn restriction_keeps_induced_subgraphs(t in tree(7, 3), seed in any::<u64>()) {
        let names = t.leaf_names();
        let keep = common::random_subset(&mut ChaCha8Rng::seed_from_u64(seed), names.len());
        prop_assume!(!keep.is_empty());
        let kept: Vec<&String> = keep.iter().map(|&i| &names[i]).collect();
        let r = t.restrict(kept.iter().map(|s| s.as_str())).unwrap();
        let g = t.explain(2);
        let h = g.induced_subgraph(&keep).unwrap();
        prop_assert!(verify(&r, &h, 2).unwrap());
    }

    #[test]
    fn quotients_are_point_determining(g in graph(8)) {
        let p = g.false_twin_partition();
        let q = g.quotient(&p).unwrap();
        prop_assert!(q.false_twin_partition().is_discrete());
        let reps = g.induced_subgraph(&p.representatives()).unwrap();
        prop_assert!(reps.is_isomorphic_to(&q));
    }

    #[test]
    fn block_graphs_avoid_cycles_and_diamonds(g in graph(7)) {
        prop_assert_eq!(g.is_block_graph(), !induced_cycle_or_diamond(&g));
    }

    #[test]
    fn blocks_are_maximal_biconnected_pieces(g in graph(8)) {
        let blocks = g.block_decomposition().blocks;
        let mut covered = BTreeSet::new();
        for (u, v) in g.edges() {
            let holding = blocks.iter().filter(|b| b.contains(&u) && b.contains(&v)).count();
            prop_assert_eq!(holding, 1);
            covered.insert((u, v));
        }
        for (i, a) in blocks.iter().enumerate() {
            prop_assert!(biconnected(&g, a));
            for b in &blocks[i + 1..] {
                prop_assert!(a.intersection(b).count() <= 1);
                if a.intersection(b).count() == 1 {
                    let union: BTreeSet<usize> = a.union(b).copied().collect();
                    prop_assert!(!biconnected(&g, &union));
                }
            }
        }
    }

    #[test]
    fn newick_round_trip(t in tree(8, 4)) {
        let text = t.to_newick();
        let back = parse_tree(&text).unwrap();
        prop_assert_eq!(back.canonical_key(), t.canonical_key());
        prop_assert_eq!(back.to_newick(), text);
    }

    #[test]
    fn graph_text_round_trip(g in graph(8), d in oriented(6)) {
        prop_assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
        prop_assert_eq!(parse_oriented(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn rooted_relation_lies_inside_the_unrooted_one(t in tree(7, 3), pick in any::<usize>(), k in 1u64..4) {
        let inner: Vec<usize> = (0..t.node_count()).filter(|&v| !t.is_leaf(v)).collect();
        prop_assume!(!inner.is_empty());
        let r = RootedLabeledTree::new(t.clone(), inner[pick % inner.len()]).unwrap();
        let d = r.directed_explain(k);
        let g = t.explain(k);
        for (u, v) in d.arcs() {
            prop_assert!(!d.has_arc(v, u));
            prop_assert!(g.has_edge(u, v));
        }
    }

    #[test]
    fn oriented_constructions_verify(d in oriented(7)) {
        match recognize_oriented(&d) {
            Ok(()) => {
                let r = construct_oriented(&d).unwrap();
                prop_assert!(verify_oriented(&r, &d, 2).unwrap());
                let t = r.underlying_tree();
                let dist = t.distance_matrix();
                let p = d.twin_partition();
                for a in 0..d.n() {
                    for b in a + 1..d.n() {
                        if dist.by_name(&d.name(a), &d.name(b)) == Some(0) {
                            prop_assert_eq!(p.class_of(a), p.class_of(b));
                        }
                    }
                }
            }
            Err(_) => prop_assert!(construct_oriented(&d).is_err()),
        }
    }
}
