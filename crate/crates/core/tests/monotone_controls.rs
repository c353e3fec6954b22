use qmeasure::monotone::{
    bures_distance, catalog, chentsov_mean, check_self_adjoint, depolarize, log_grid, monotonicity_profile,
    operator_monotonicity_test, Direction, OpMonoConfig,
};
use qmeasure::verify::{bures_contraction, means_max_error};
use qmeasure::{RngStream, ScalarFunction};
use rand::Rng;

const NUS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

#[test]
fn catalog_survives_random_ordered_pairs() {
    for dim in [2, 3] {
        for f in catalog() {
            let cfg = OpMonoConfig::new(dim, 10_000, (0.0, 10.0), 100 + dim as u64);
            let r = operator_monotonicity_test(&f, &cfg).unwrap();
            assert_eq!(r.trials, 10_000);
            assert_eq!(r.violations, 0, "{} at dim {dim}", f.name());
        }
    }
}

#[test]
fn derived_family_fails_in_one_dimension() {
    for nu in NUS {
        let f = ScalarFunction::derived(nu).unwrap();
        let cfg = OpMonoConfig::new(1, 100, (0.0, 1.0), 7);
        let r = operator_monotonicity_test(&f, &cfg).unwrap();
        assert!(r.violations >= 1, "nu = {nu}");
        assert!(r.worst_counterexample.unwrap().reverify(&f).unwrap());
    }
}

#[test]
fn every_reported_counterexample_reverifies() {
    let f = ScalarFunction::square();
    for seed in 0..5 {
        let r = operator_monotonicity_test(&f, &OpMonoConfig::new(3, 500, (0.0, 5.0), seed)).unwrap();
        if let Some(c) = r.worst_counterexample {
            assert!(c.reverify(&f).unwrap());
        }
    }
}

#[test]
fn derived_family_profiles() {
    let grid = log_grid(1e-3, 1e3, 2001);
    for nu in NUS {
        let f = ScalarFunction::derived(nu).unwrap();
        assert!(check_self_adjoint(&f, &grid).unwrap().passed, "nu = {nu}");
        let low = monotonicity_profile(&f, 0.001, 0.999, 10_000).unwrap();
        let high = monotonicity_profile(&f, 1.001, 50.0, 10_000).unwrap();
        assert_eq!(low.direction, Direction::Decreasing, "nu = {nu}");
        assert_eq!(high.direction, Direction::Increasing, "nu = {nu}");
        for t in [1.0 - 1e-10, 1.0, 1.0 + 1e-10] {
            assert!(f.eval(t).abs() < 1e-20, "nu = {nu}, t = {t}");
        }
    }
}

#[test]
fn means_of_the_derived_family() {
    assert!(means_max_error(1000, 5).unwrap() < 1e-12);
    let mut rng = RngStream::new(6);
    let self_adjoint: Vec<ScalarFunction> = catalog()
        .into_iter()
        .filter(|f| f.claims().self_adjoint)
        .chain(NUS.iter().map(|&nu| ScalarFunction::derived(nu).unwrap()))
        .collect();
    for _ in 0..1000 {
        let x: f64 = rng.random_range(0.01..10.0);
        let y: f64 = rng.random_range(0.01..10.0);
        for f in &self_adjoint {
            let (a, b) = (chentsov_mean(f, x, y).unwrap(), chentsov_mean(f, y, x).unwrap());
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{}", f.name());
            assert!((chentsov_mean(f, x, x).unwrap() - x * f.eval(1.0)).abs() < 1e-12 * x.max(1.0));
        }
    }
}

#[test]
fn bures_distance_contracts_under_depolarization() {
    let ps = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    let r = bures_contraction(10_000, &ps, 77, 1e-10).unwrap();
    assert_eq!(r.comparisons, 90_000);
    assert_eq!(r.violations, 0);
    assert!(r.max_excess <= 1e-10);
}

#[test]
fn depolarizing_extremes() {
    let mut rng = RngStream::new(8);
    for _ in 0..100 {
        let rho = qmeasure::measures::sample_zhsl(1.0, &mut rng).unwrap();
        assert!(depolarize(1.0, &rho).unwrap().max_abs_diff(&rho) < 1e-15);
        let flat = depolarize(0.0, &rho).unwrap();
        assert!(bures_distance(&flat, &qmeasure::Matrix2C::maximally_mixed()).unwrap() < 1e-7);
    }
}
