//! Eigensolver checks against closed forms, exact characteristic
//! polynomials, and an independent dense solver.

use std::f64::consts::PI;

use oddfactor::spectral::{
    adjacency_matrix, eigenvalues_sym, is_equitable, lambda_k, quotient_eigs_2x2, quotient_matrix, spectrum, SymMatrix,
    VertexPartition, DEFAULT_TOL,
};
use oddfactor::thresholds::{build_extremal, extremal_partition, threshold_params};
use oddfactor::{Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Characteristic polynomial coefficients `[1, c1, ..., cn]` of an integer
/// matrix by Faddeev-LeVerrier, in exact integer arithmetic.
fn char_poly(a: &[Vec<i128>]) -> Vec<i128> {
    let n = a.len();
    let mul = |x: &[Vec<i128>], y: &[Vec<i128>]| -> Vec<Vec<i128>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
    };
    let mut coeffs = vec![1i128];
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        for i in 0..n {
            m[i][i] += coeffs[k - 1];
        }
        let am = mul(a, &m);
        let tr: i128 = (0..n).map(|i| am[i][i]).sum();
        assert_eq!(tr % k as i128, 0);
        coeffs.push(-tr / k as i128);
        m = am;
    }
    coeffs
}

/// Coefficients of `prod (x - root)` for integer roots.
fn poly_from_roots(roots: &[i128]) -> Vec<i128> {
    let mut p = vec![1i128];
    for &r in roots {
        let mut next = p.clone();
        next.push(0);
        for (i, c) in p.iter().enumerate() {
            next[i + 1] -= r * c;
        }
        p = next;
    }
    p
}

fn int_adjacency(g: &Graph) -> Vec<Vec<i128>> {
    (0..g.order()).map(|i| (0..g.order()).map(|j| i128::from(g.has_edge(i, j))).collect()).collect()
}

fn assert_spectrum(g: &Graph, expected: &[f64]) {
    let got = spectrum(g).unwrap().values;
    assert_eq!(got.len(), expected.len());
    for (x, y) in got.iter().zip(expected) {
        assert!((x - y).abs() < 1e-10, "{got:?} vs {expected:?}");
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
    Graph::from_edges(n, edges).unwrap()
}

#[test]
fn integer_spectra_match_characteristic_polynomials() {
    let cases: Vec<(Graph, Vec<i128>)> = vec![
        (Graph::complete(4), vec![3, -1, -1, -1]),
        (Graph::cycle(4).unwrap(), vec![2, 0, 0, -2]),
        (Graph::complete_bipartite(3, 3), vec![3, 0, 0, 0, 0, -3]),
        (Graph::petersen(), vec![3, 1, 1, 1, 1, 1, -2, -2, -2, -2]),
    ];
    for (g, roots) in cases {
        assert_eq!(char_poly(&int_adjacency(&g)), poly_from_roots(&roots));
        let expected: Vec<f64> = roots.iter().map(|&r| r as f64).collect();
        assert_spectrum(&g, &expected);
    }
}

#[test]
fn closed_form_families() {
    for n in 3..=12 {
        let mut cyc: Vec<f64> = (0..n).map(|k| 2.0 * (2.0 * PI * k as f64 / n as f64).cos()).collect();
        cyc.sort_by(|a, b| b.total_cmp(a));
        assert_spectrum(&Graph::cycle(n).unwrap(), &cyc);

        let mut kn = vec![-1.0; n];
        kn[0] = n as f64 - 1.0;
        assert_spectrum(&Graph::complete(n), &kn);
    }
    for (a, b) in [(1, 3), (2, 5), (4, 4)] {
        let mut v = vec![0.0; a + b];
        let root = ((a * b) as f64).sqrt();
        v[0] = root;
        v[a + b - 1] = -root;
        assert_spectrum(&Graph::complete_bipartite(a, b), &v);
    }
}

#[test]
fn lambda_k_examples() {
    assert!((lambda_k(&Graph::complete(4), 1).unwrap() - 3.0).abs() < 1e-12);
    assert!((lambda_k(&Graph::petersen(), 3).unwrap() - 1.0).abs() < 1e-10);
    assert!((lambda_k(&Graph::cycle(4).unwrap(), 4).unwrap() + 2.0).abs() < 1e-12);
}

#[test]
fn agrees_with_independent_dense_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n = rng.gen_range(1..=20);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect();
        let m = SymMatrix::from_rows(&rows);
        let ours = eigenvalues_sym(&m, DEFAULT_TOL).unwrap().values;
        let na = nalgebra::DMatrix::from_fn(n, n, |i, j| m.get(i, j));
        let mut theirs: Vec<f64> = na.symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
        assert!(ours.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn deterministic_output() {
    let g = Graph::petersen();
    assert_eq!(spectrum(&g).unwrap(), spectrum(&g).unwrap());
}

#[test]
fn trace_energy_and_degree_bounds_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.gen_range(1..=16);
        let p = rng.gen_range(0.1..0.9);
        let g = random_graph(&mut rng, n, p);
        let s = spectrum(&g).unwrap();
        assert!(s.sum().abs() < 1e-9);
        assert!((s.sum_of_squares() - 2.0 * g.size() as f64).abs() < 1e-8);
        assert!(s.values[0] >= 2.0 * g.size() as f64 / n as f64 - 1e-9);
        let m = adjacency_matrix(&g);
        assert_eq!(m.trace(), 0.0);
    }
}

#[test]
fn regular_graphs_have_lambda1_equal_to_degree() {
    let graphs = [
        Graph::petersen(),
        Graph::complete(7),
        Graph::cycle(9).unwrap(),
        Graph::matching_complement(8).unwrap(),
        Graph::complete_bipartite(4, 4),
        Graph::cycle(7).unwrap().complement(),
    ];
    for g in graphs {
        let r = g.regular_degree().unwrap() as f64;
        assert!((lambda_k(&g, 1).unwrap() - r).abs() < 1e-9);
    }
}

#[test]
fn interlacing_for_induced_subgraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.gen_range(2..=12);
        let g = random_graph(&mut rng, n, 0.5);
        let keep: Vec<usize> = loop {
            let k: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
            if !k.is_empty() {
                break k;
            }
        };
        let (h, _) = g.induced_subgraph(&VertexSet::new(keep, n).unwrap()).unwrap();
        let sg = spectrum(&g).unwrap().values;
        let sh = spectrum(&h).unwrap().values;
        let m = h.order();
        for i in 0..m {
            assert!(sh[i] <= sg[i] + 1e-9);
            // lower interlacing: lambda_{n-m+i}(G) <= lambda_i(H)
            assert!(sh[i] >= sg[n - m + i] - 1e-9);
        }
    }
}

fn two_block(n: usize, first: Vec<usize>) -> Option<VertexPartition> {
    let second: Vec<usize> = (0..n).filter(|v| !first.contains(v)).collect();
    if first.is_empty() || second.is_empty() {
        return None;
    }
    let blocks = vec![VertexSet::new(first, n).unwrap(), VertexSet::new(second, n).unwrap()];
    Some(VertexPartition::new(n, blocks).unwrap())
}

#[test]
fn quotient_eigenvalues_interlace_for_arbitrary_partitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(2..=12);
        let g = random_graph(&mut rng, n, 0.5);
        let Some(p) = two_block(n, (0..n).filter(|_| rng.gen_bool(0.5)).collect()) else { continue };
        let q = quotient_matrix(&g, &p).unwrap();
        for (i, block) in p.blocks().iter().enumerate() {
            let avg = block.iter().map(|v| g.degree(v)).sum::<usize>() as f64 / block.len() as f64;
            assert!((q.row_sum(i) - avg).abs() < 1e-12);
        }
        let (mu1, mu2) = quotient_eigs_2x2(&q).unwrap();
        let s = spectrum(&g).unwrap().values;
        assert!(mu1 <= s[0] + 1e-8 && mu2 <= s[1] + 1e-8);
        assert!(mu1 >= s[n - 2] - 1e-8 && mu2 >= s[n - 1] - 1e-8);
        if is_equitable(&g, &p) {
            for mu in [mu1, mu2] {
                assert!(s.iter().any(|l| (l - mu).abs() < 1e-8));
            }
            if g.components().len() == 1 {
                assert!((mu1 - s[0]).abs() < 1e-8);
            }
        }
        checked += 1;
    }
}

#[test]
fn extremal_partitions_are_equitable_and_embed() {
    for r in 3..=20 {
        for b in (1..r).step_by(2) {
            let p = threshold_params(r, b).unwrap();
            let Ok(h) = build_extremal(&p) else { continue };
            let part = extremal_partition(&p).unwrap();
            assert!(is_equitable(&h, &part), "({r}, {b})");
            let q = quotient_matrix(&h, &part).unwrap();
            let s = spectrum(&h).unwrap().values;
            let eigs = if q.order() == 2 {
                let (a, c) = quotient_eigs_2x2(&q).unwrap();
                vec![a, c]
            } else {
                vec![q.get(0, 0)]
            };
            for mu in &eigs {
                assert!(s.iter().any(|l| (l - mu).abs() < 1e-8));
            }
            assert!((eigs[0] - s[0]).abs() < 1e-8);
        }
    }
}

#[test]
fn h53_quotient_matches_closed_form() {
    let p = threshold_params(5, 3).unwrap();
    assert_eq!(p.eta, 1);
    let p = threshold_params(5, 1).unwrap();
    let h = build_extremal(&p).unwrap();
    let q = quotient_matrix(&h, &extremal_partition(&p).unwrap()).unwrap();
    assert_eq!(q.rows(), vec![vec![0.0, 4.0], vec![3.0, 2.0]]);
    let (hi, _) = quotient_eigs_2x2(&q).unwrap();
    assert!((hi - 4.605551275).abs() < 1e-9);
}
