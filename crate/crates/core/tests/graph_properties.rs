use oddfactor::graph::{standard_graph, StandardKind};
use oddfactor::io::{parse_edge_list, serialize_edge_list, to_dot};
use oddfactor::{Graph, VertexSet};
use proptest::prelude::*;

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs = all_pairs(n);
    Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let m = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), m).prop_map(move |bits| {
            let edges = all_pairs(n).into_iter().zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn arb_graph_and_set(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.order();
        proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
            let s = (0..n).filter(|&v| bits[v]).collect();
            (g.clone(), VertexSet::new(s, n).unwrap())
        })
    })
}

#[test]
fn complement_is_an_involution_on_all_small_graphs() {
    for n in 0..=5usize {
        let m = n * n.saturating_sub(1) / 2;
        for mask in 0..1u64 << m {
            let g = graph_from_mask(n, mask);
            let c = g.complement();
            c.validate().unwrap();
            assert_eq!(c.size(), m - g.size());
            assert_eq!(c.complement(), g);
        }
    }
}

#[test]
fn standard_kinds_dispatch() {
    assert_eq!(standard_graph(StandardKind::Complete, 4).unwrap(), Graph::complete(4));
    assert_eq!(standard_graph(StandardKind::Cycle, 5).unwrap().size(), 5);
    assert!(standard_graph(StandardKind::Cycle, 2).is_err());
    assert_eq!(standard_graph(StandardKind::Empty, 3).unwrap().size(), 0);
    assert!(standard_graph(StandardKind::MatchingComplement, 5).is_err());
    assert_eq!(standard_graph(StandardKind::MatchingComplement, 6).unwrap().regular_degree(), Some(4));
}

#[test]
fn dot_export_lists_every_edge() {
    let dot = to_dot(&Graph::cycle(4).unwrap());
    assert!(dot.starts_with("graph g {"));
    assert_eq!(dot.matches(" -- ").count(), 4);
}

proptest! {
    #[test]
    fn constructions_satisfy_invariants(g in arb_graph(8), h in arb_graph(6)) {
        for x in [g.complement(), g.join(&h), Graph::disjoint_union(&[g.clone(), h.clone()])] {
            x.validate().unwrap();
            prop_assert_eq!(x.degrees().iter().sum::<usize>(), 2 * x.size());
        }
    }

    #[test]
    fn join_edge_count(g in arb_graph(7), h in arb_graph(7)) {
        let j = g.join(&h);
        prop_assert_eq!(j.size(), g.size() + h.size() + g.order() * h.order());
        prop_assert_eq!(j.order(), g.order() + h.order());
    }

    #[test]
    fn union_components_add(g in arb_graph(7), h in arb_graph(7)) {
        let u = Graph::disjoint_union(&[g.clone(), h.clone()]);
        prop_assert_eq!(u.components().len(), g.components().len() + h.components().len());
        prop_assert_eq!(u.odd_component_count(), g.odd_component_count() + h.odd_component_count());
    }

    #[test]
    fn deletion_bounds_odd_components((g, s) in arb_graph_and_set(9)) {
        let (rest, map) = g.delete_vertices(&s).unwrap();
        rest.validate().unwrap();
        prop_assert_eq!(rest.order(), g.order() - s.len());
        let comps = rest.components();
        let o = rest.odd_component_count();
        prop_assert!(o <= comps.len());
        if comps.iter().all(|c| c.len() % 2 == 1) {
            prop_assert_eq!(o % 2, (g.order() - s.len()) % 2);
        }
        // induced on the complement gives the same graph and labels
        let keep: Vec<usize> = (0..g.order()).filter(|&v| !s.contains(v)).collect();
        let (same, map2) = g.induced_subgraph(&VertexSet::new(keep, g.order()).unwrap()).unwrap();
        prop_assert_eq!(&same, &rest);
        prop_assert_eq!(&map, &map2);
        for &(u, v) in rest.edges() {
            prop_assert!(g.has_edge(map.old_index(u), map.old_index(v)));
        }
    }

    #[test]
    fn components_partition_vertices(g in arb_graph(10)) {
        let mut all: Vec<usize> = g.components().into_iter().flat_map(VertexSet::into_vec).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..g.order()).collect::<Vec<_>>());
        for c in g.components() {
            let others: Vec<usize> = (0..g.order()).filter(|&v| !c.contains(v)).collect();
            let others = VertexSet::new(others, g.order()).unwrap();
            prop_assert_eq!(g.edge_boundary(&c, &others).unwrap(), 0);
        }
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(10)) {
        let text = serialize_edge_list(&g);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g.clone());
        let trimmed = text.trim_end_matches('\n');
        prop_assert_eq!(parse_edge_list(trimmed).unwrap(), g);
    }
}
