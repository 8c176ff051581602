use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specnorm::graph::{
    adjacency, centered_adjacency, edge_count, forward_bounds, neighborhood_energy, parse_graph, Graph,
    GraphSpectralProfile,
};
use specnorm::linalg::{norm2, top_singular, SolverOptions};
use specnorm::witness::BinaryVector;
use specnorm::Error;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> BinaryVector {
    loop {
        let v = BinaryVector::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5))).unwrap();
        if !v.is_empty() {
            return v;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn forward_bounds_hold(g in graph(24), seed in any::<u64>()) {
        let n = g.vertex_count();
        let profile = GraphSpectralProfile::compute(&g, &SolverOptions::default()).unwrap();
        prop_assert!(profile.check(1e-8).is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let x = random_subset(&mut rng, n);
            let y = random_subset(&mut rng, n);
            prop_assert!(forward_bounds(&g, profile.rho, &x, &y).is_ok());
        }
    }

    #[test]
    fn counts_match_matrix_forms(g in graph(16), bits in proptest::collection::vec(any::<bool>(), 32)) {
        let n = g.vertex_count();
        let x = BinaryVector::from_indices(n, (0..n).filter(|&i| bits[i])).unwrap();
        let y = BinaryVector::from_indices(n, (0..n).filter(|&i| bits[16 + i])).unwrap();
        prop_assume!(!x.is_empty() && !y.is_empty());
        let a = adjacency(&g);
        let ax = a.column_sum(x.iter_ones());
        prop_assert_eq!(neighborhood_energy(&g, &x).unwrap() as f64, norm2(&ax).powi(2).round());
        let bilinear: f64 = y.iter_ones().map(|i| ax[i].re).sum();
        prop_assert_eq!(edge_count(&g, &x, &y).unwrap() as f64, bilinear);
    }

    #[test]
    fn edge_list_round_trips(g in graph(20)) {
        let mut text = format!("{}\n", g.vertex_count());
        for (u, v) in g.edges() {
            text.push_str(&format!("{u} {v}\n"));
        }
        let h = parse_graph(&text).unwrap();
        prop_assert_eq!(h.vertex_count(), g.vertex_count());
        prop_assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn centered_matrix_has_zero_mean(g in graph(16)) {
        let c = centered_adjacency(&g);
        let total: f64 = c.data().iter().map(|z| z.re).sum();
        prop_assert!(total.abs() <= 1e-9 * (g.vertex_count() * g.vertex_count()) as f64);
    }
}

fn spectra(g: &Graph) -> (f64, f64) {
    let p = GraphSpectralProfile::compute(g, &SolverOptions::default()).unwrap();
    (p.rho, p.sigma)
}

#[test]
fn spectral_dictionary() {
    for n in 2..10 {
        let (rho, sigma) = spectra(&Graph::complete(n).unwrap());
        assert!((rho - (n - 1) as f64).abs() < 1e-8, "K{n}");
        assert!((sigma - 1.0).abs() < 1e-8, "K{n}");
    }
    for (a, b) in [(1, 1), (2, 3), (4, 4), (3, 7)] {
        let (rho, sigma) = spectra(&Graph::complete_bipartite(a, b).unwrap());
        let s = ((a * b) as f64).sqrt();
        assert!((rho - s).abs() < 1e-8 && (sigma - s).abs() < 1e-8, "K{a},{b}");
    }
    for n in 2..10 {
        let (rho, _) = spectra(&Graph::path(n).unwrap());
        let expected = 2.0 * (std::f64::consts::PI / (n + 1) as f64).cos();
        assert!((rho - expected).abs() < 1e-8, "P{n}");
    }
    for leaves in 1..8 {
        let (rho, sigma) = spectra(&Graph::star(leaves).unwrap());
        assert!((rho - (leaves as f64).sqrt()).abs() < 1e-8);
        assert!((sigma - (leaves as f64).sqrt()).abs() < 1e-8);
    }
}

#[test]
fn centered_spectrum_of_regular_graph() {
    // K_n minus its mean keeps only the eigenvalue -1
    let c = centered_adjacency(&Graph::complete(6).unwrap());
    let top = top_singular(&c, &SolverOptions::default()).unwrap();
    assert!((top.value - 1.0).abs() < 1e-8);
}

#[test]
fn parse_errors() {
    assert!(matches!(parse_graph("3\n0 0\n"), Err(Error::LoopRejected { .. })));
    assert!(matches!(parse_graph("3\n0 5\n"), Err(Error::Parse { .. })));
    assert!(matches!(parse_graph("0 1 2\n"), Err(Error::Parse { .. })));
    let g = parse_graph("# comment\n0 1\n\n1 2 # trailing\n").unwrap();
    assert_eq!(g.vertex_count(), 3);
    assert_eq!(g.edge_total(), 2);
}
