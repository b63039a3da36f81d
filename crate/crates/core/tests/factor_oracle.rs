use oddfactor::factor::{
    check_amahashi, find_odd_factor, small_boundary_components, verify_certificate, violation_for, AmahashiOptions,
    FinderOptions,
};
use oddfactor::verify::{bridged_gadget_graph, random_regular};
use oddfactor::{Execution, Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap()
}

/// Asserts both deciders agree and returns whether a factor exists.
fn agree(g: &Graph, b: usize, exec: Execution) -> bool {
    let opts = AmahashiOptions { execution: exec, ..AmahashiOptions::default() };
    let holds = check_amahashi(g, b, opts).unwrap();
    let found = find_odd_factor(g, b, FinderOptions { max_edges: 128 }).unwrap();
    assert_eq!(holds.holds(), found.is_some(), "b = {b}, edges = {:?}", g.edges());
    if let Some(cert) = &found {
        verify_certificate(g, b, cert).unwrap();
    }
    if let Some(v) = holds.violation() {
        assert!(v.o > v.bound);
        assert_eq!(v.bound, b * v.s.len());
        let (rest, _) = g.delete_vertices(&v.s).unwrap();
        assert_eq!(rest.odd_component_count(), v.o);
        for c in &v.odd_components {
            assert_eq!(c.len() % 2, 1);
            assert!(c.iter().all(|x| !v.s.contains(x)));
        }
    }
    found.is_some()
}

#[test]
fn exhaustive_agreement_up_to_five_vertices() {
    for n in 0..=5usize {
        let m = n * n.saturating_sub(1) / 2;
        for mask in 0..1u64 << m {
            let g = graph_from_mask(n, mask);
            for b in [1, 3] {
                let exists = agree(&g, b, Execution::Sequential);
                if n % 2 == 1 {
                    assert!(!exists);
                }
            }
        }
    }
}

#[test]
fn random_agreement_up_to_twelve_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut with_factor = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.15..0.7);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
        let g = Graph::from_edges(n, edges).unwrap();
        let b = [1, 3, 5][rng.gen_range(0..3)];
        with_factor += usize::from(agree(&g, b, Execution::Parallel));
    }
    // the sample must exercise both answers
    assert!(with_factor > 50 && with_factor < 450, "{with_factor}");
}

#[test]
fn odd_order_always_fails_both() {
    for g in [Graph::complete(5), Graph::cycle(7).unwrap(), Graph::petersen().complement().join(&Graph::empty(1))] {
        for b in [1, 3, 5] {
            let v = check_amahashi(&g, b, AmahashiOptions::default()).unwrap();
            assert!(v.violation().is_some_and(|v| v.s.is_empty() && v.o >= 1));
            assert_eq!(find_odd_factor(&g, b, FinderOptions { max_edges: 128 }).unwrap(), None);
        }
    }
}

#[test]
fn parallel_and_sequential_witnesses_match() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.gen_range(4..=14);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.25)).collect();
        let g = Graph::from_edges(n, edges).unwrap();
        let seq = check_amahashi(&g, 1, AmahashiOptions { execution: Execution::Sequential, ..Default::default() });
        let par = check_amahashi(&g, 1, AmahashiOptions { execution: Execution::Parallel, ..Default::default() });
        assert_eq!(seq, par);
    }
}

#[test]
fn violations_in_regular_graphs_have_three_small_components() {
    // the 16-vertex cubic graph without a perfect matching
    let g = bridged_gadget_graph(3).unwrap();
    let outcome = check_amahashi(&g, 1, AmahashiOptions::default()).unwrap();
    let v = outcome.violation().expect("no perfect matching");
    assert_eq!(v.s, VertexSet::new(vec![0], 16).unwrap());
    assert!(v.o >= v.bound + 2);
    assert!(small_boundary_components(&g, &v.s, 3, 1).unwrap().len() >= 3);
    assert_eq!(find_odd_factor(&g, 1, FinderOptions::default()).unwrap(), None);

    for r in [5, 7] {
        let g = bridged_gadget_graph(r).unwrap();
        let s = VertexSet::new(vec![0], g.order()).unwrap();
        for b in (1..r).step_by(2) {
            let v = violation_for(&g, &s, b).unwrap().expect("centre separates r odd gadgets");
            assert!(v.o >= v.bound + 2);
            assert!(small_boundary_components(&g, &s, r, b).unwrap().len() >= 3);
        }
    }

    // random connected cubic graphs: any violation found must obey the counting step
    for seed in 0..60 {
        let g = random_regular(12, 3, seed).unwrap();
        if g.components().len() > 1 {
            continue;
        }
        if let Some(v) = check_amahashi(&g, 1, AmahashiOptions::default()).unwrap().violation() {
            assert!(v.o >= v.bound + 2);
            assert!(small_boundary_components(&g, &v.s, 3, 1).unwrap().len() >= 3);
        }
    }
}

#[test]
fn finder_handles_larger_regular_graphs() {
    for (n, r, b) in [(20, 7, 1), (20, 7, 5), (18, 6, 3), (16, 5, 3)] {
        for seed in 0..3 {
            let g = random_regular(n, r, seed).unwrap();
            let cert = find_odd_factor(&g, b, FinderOptions { max_edges: 256 }).unwrap().expect("dense regular graph");
            verify_certificate(&g, b, &cert).unwrap();
        }
    }
}
