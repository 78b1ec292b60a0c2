use num_traits::{One, Zero};
use proptest::prelude::*;

use udm::graphic::generate::{random_connected_graph, random_graph};
use udm::graphic::named;
use udm::graphic::{cycle_matroid, is_uniformly_dense_graph, CheckMode, Graph};
use udm::io::{graph_text, parse_graph};
use udm::linalg::{int, usize_rat, QMatrix, Rational};
use udm::matroid::{
    direct_sum, dual, for_each_k_subset, is_strictly_uniformly_dense, is_uniformly_dense, union, Matroid,
    ScanOptions, Subset,
};
use udm::measure::BasisMeasure;
use udm::representable::{
    constant_diag_projection, determinantal_measure, matroid_from_matrix, matroid_from_projection, operator_scale,
    principal_rank_bounds, projection, ConstantDiagonal, RankBound, ScalingOptions, ScalingStatus,
};
use udm::spectral::{
    edge_laplacian, lambda_max, lambda_max_bounds, normalized_laplacian, nullity, spectrum, stable_bound,
    SubsetSelection, DEFAULT_EIGEN_TOL,
};

fn connected(n: usize, extra: usize, seed: u64) -> Graph {
    let max = n * (n - 1) / 2;
    let m = n - 1 + extra % (max - (n - 1) + 1);
    random_connected_graph(n, m, seed)
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..=6, 0usize..16, any::<u64>()).prop_map(|(n, extra, seed)| connected(n, extra, seed))
}

fn tiny_graph() -> impl Strategy<Value = Graph> {
    (2usize..=5, 0usize..16, any::<u64>()).prop_map(|(n, extra, seed)| connected(n, extra, seed))
}

fn matrix(k: usize, n: usize, values: &[i64]) -> QMatrix {
    QMatrix::from_i64(k, n, &values[..k * n])
}

fn full_rank_matrix() -> impl Strategy<Value = QMatrix> {
    (1usize..=4, 0usize..=4, prop::collection::vec(-2i64..=2, 32)).prop_filter_map("rank deficient", |(k, extra, v)| {
        let x = matrix(k, k + extra, &v);
        (x.rank() == k).then_some(x)
    })
}

fn ud(m: &Matroid) -> bool {
    is_uniformly_dense(m).unwrap().verdict.is_uniformly_dense()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn marginals_sum_to_rank_times_mass(g in small_graph(), weights in prop::collection::vec(0i64..20, 64)) {
        let m = cycle_matroid(&g).unwrap();
        let mu = BasisMeasure::new(m.bases().zip(weights.iter().cycle()).map(|(b, &w)| (b, int(w))));
        let sum: Rational = mu.marginals(m.ground_size()).iter().sum();
        prop_assert_eq!(sum, usize_rat(m.full_rank()) * mu.total());
    }

    #[test]
    fn rank_is_submodular_and_monotone(g in small_graph(), a in any::<u64>(), b in any::<u64>()) {
        let full = g.all_edges().mask();
        let (a, b) = (Subset::from_mask(a & full), Subset::from_mask(b & full));
        let r = |s: Subset| g.rank(s);
        prop_assert!(r(a.union(b)) + r(a.intersection(b)) <= r(a) + r(b));
        prop_assert!(r(a.intersection(b)) <= r(a));
        prop_assert!(r(a) <= a.len());
    }

    #[test]
    fn duality_preserves_uniform_density(g in small_graph()) {
        let m = cycle_matroid(&g).unwrap();
        prop_assert_eq!(ud(&m), ud(&dual(&m)));
        prop_assert_eq!(dual(&dual(&m)), m);
    }

    #[test]
    fn direct_sum_law(g in tiny_graph(), h in tiny_graph()) {
        let (m1, m2) = (cycle_matroid(&g).unwrap(), cycle_matroid(&h).unwrap());
        let sum = direct_sum(&m1, &m2).unwrap();
        prop_assert_eq!(ud(&sum), ud(&m1) && ud(&m2) && m1.matroid_density() == m2.matroid_density());
    }

    #[test]
    fn union_preserves_uniform_density(g in small_graph(), k in 0usize..=8, shift in any::<usize>()) {
        let m = cycle_matroid(&g).unwrap();
        prop_assume!(ud(&m));
        let n = m.ground_size();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(shift % n);
        prop_assert!(ud(&union(&m, &m.relabel(&perm)).unwrap()));
        prop_assert!(ud(&union(&m, &Matroid::uniform(n, k.min(n))).unwrap()));
    }

    #[test]
    fn laplacian_nullities(n in 2usize..12, p in 0.1f64..0.9, seed in any::<u64>()) {
        let g = random_graph(n, p, seed).without_isolated();
        prop_assume!(g.edge_count() > 0);
        prop_assert_eq!(nullity(&normalized_laplacian(&g).unwrap()), g.components(g.all_edges()));
        prop_assert_eq!(nullity(&edge_laplacian(&g).unwrap()), g.betti(g.all_edges()));
    }

    #[test]
    fn vertex_and_edge_spectra_agree(n in 2usize..10, p in 0.2f64..0.9, seed in any::<u64>()) {
        let g = random_graph(n, p, seed).without_isolated();
        prop_assume!(g.edge_count() > 0);
        let l = spectrum(&normalized_laplacian(&g).unwrap(), DEFAULT_EIGEN_TOL).unwrap();
        let l1 = spectrum(&edge_laplacian(&g).unwrap(), DEFAULT_EIGEN_TOL).unwrap();
        for v in &l.eigenvalues {
            prop_assert!((-1e-10..=2.0 + 1e-10).contains(v));
        }
        let (a, b) = (l.nonzero(1e-8), l1.nonzero(1e-8));
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8, "{} vs {}", x, y);
        }
    }

    #[test]
    fn restrictions_of_uniformly_dense_graphs(g in small_graph(), a in any::<u64>()) {
        prop_assume!(g.edge_count() <= 12);
        let cert = is_uniformly_dense_graph(&g, CheckMode::Exhaustive, &ScanOptions::default()).unwrap();
        prop_assume!(cert.verdict.is_uniformly_dense());
        let a = Subset::from_mask(a & g.all_edges().mask());
        prop_assume!(!a.is_empty());
        prop_assert!(stable_bound(&g, a).unwrap().holds());
        let report = lambda_max_bounds(&g, SubsetSelection::Sample { count: 4, seed: 1 }, &ScanOptions::default()).unwrap();
        let packing = report.packing.as_ref().unwrap();
        prop_assert!(report.global.holds() && packing.check.holds());
        prop_assert!(packing.check.rhs >= report.global.rhs - 1e-12);
        prop_assert!(report.violations().is_empty());
    }

    #[test]
    fn projection_round_trip(x in full_rank_matrix()) {
        let t = projection(&x).unwrap();
        prop_assert!(t.is_projection());
        prop_assert_eq!(matroid_from_projection(&t).unwrap(), matroid_from_matrix(&x).unwrap());
    }

    #[test]
    fn principal_minors_are_normalised_squared_minors(x in full_rank_matrix()) {
        let t = projection(&x).unwrap();
        let gram = x.mul(&x.transpose()).det();
        let (k, n) = (x.rows(), x.cols());
        let mut total = Rational::zero();
        let mut ok = true;
        for_each_k_subset(n, k, |mask| {
            let idx = Subset::from_mask(mask).indices();
            let d = x.select_columns(&idx).det();
            let p = t.principal_det_exact(&idx).unwrap();
            ok &= p == &d * &d / &gram;
            total += p;
        });
        prop_assert!(ok);
        prop_assert!(total.is_one());
    }

    #[test]
    fn determinantal_marginals(x in full_rank_matrix()) {
        let mu = determinantal_measure(&x).unwrap();
        let sum: Rational = mu.marginals(x.cols()).iter().sum();
        let squares: Rational = mu.weights().iter().map(|(_, w)| w.clone()).sum();
        prop_assert_eq!(sum, usize_rat(x.rows()) * squares);
    }

    #[test]
    fn scaling_agrees_with_exhaustive_strictness(x in full_rank_matrix()) {
        let m = matroid_from_matrix(&x).unwrap();
        let strict = is_strictly_uniformly_dense(&m).unwrap().verdict;
        let status = operator_scale(&x, &ScalingOptions::default()).unwrap().status;
        match status {
            ScalingStatus::Converged { .. } => prop_assert!(strict.is_strict()),
            ScalingStatus::Boundary(_) => prop_assert!(strict.is_uniformly_dense() && !strict.is_strict()),
            ScalingStatus::Violated(v) => {
                prop_assert!(!strict.is_uniformly_dense());
                prop_assert!(v.density > m.matroid_density());
            }
        }
    }

    #[test]
    fn constant_diagonal_projectors_bound_principal_ranks(g in small_graph()) {
        let x = g.reduced_incidence_matrix().unwrap();
        if let ConstantDiagonal::Projection { matrix, .. } = constant_diag_projection(&x, &ScalingOptions::default()).unwrap() {
            prop_assert!(matrix.has_constant_diagonal());
            prop_assert_eq!(principal_rank_bounds(&matrix).unwrap(), RankBound::Holds);
            prop_assert_eq!(matroid_from_projection(&matrix).unwrap(), cycle_matroid(&g).unwrap());
        }
    }

    #[test]
    fn graph_text_round_trip(g in small_graph(), offset in 0usize..2) {
        prop_assert_eq!(parse_graph(&graph_text(&g, offset), offset).unwrap(), g);
    }
}

#[test]
fn edge_laplacian_nullity_of_clique_and_cycle() {
    let g = named::clique_and_cycle();
    assert_eq!(nullity(&edge_laplacian(&g).unwrap()), 29 - 22);
}

#[test]
fn complete_graph_spectral_radius() {
    for n in 2..=7 {
        let lam = lambda_max(&named::complete(n)).unwrap();
        assert!((lam - n as f64 / (n - 1) as f64).abs() < 1e-9, "K{n}: {lam}");
    }
}

#[test]
fn fixtures_match_named_graphs() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let load = |name: &str| parse_graph(&std::fs::read_to_string(format!("{dir}/{name}")).unwrap(), 0).unwrap();
    assert_eq!(load("c4.txt"), named::cycle(4));
    assert_eq!(load("k4.txt"), named::complete(4));
    assert_eq!(load("cube.txt"), named::cube());
    assert_eq!(load("petersen.txt"), named::petersen());
    assert_eq!(load("tadpole.txt"), named::tadpole());
    assert_eq!(load("diamond.txt"), named::diamond());
    assert_eq!(load("clique_and_cycle.txt"), named::clique_and_cycle());
    assert_eq!(load("theta_2_3_6.txt"), named::theta(2, 3, 6));
    let tree = load("tree.txt");
    assert!(tree.is_forest(tree.all_edges()) && tree.is_connected());
}
