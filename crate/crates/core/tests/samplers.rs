use std::f64::consts::{FRAC_2_PI, PI, TAU};

use qmeasure::measures::{sample_dirichlet, sample_haar_su2, sample_zhsl, sample_zhsl_batch};
use qmeasure::verify::{ks_test, verify_zhsl_radial};
use qmeasure::{DirichletParams, RngStream};

const N: usize = 100_000;
const ALPHA: f64 = 0.01;

fn first_weights(nu: f64, seed: u64) -> Vec<f64> {
    let p = DirichletParams::new(nu, 2).unwrap();
    let mut rng = RngStream::new(seed);
    (0..N).map(|_| sample_dirichlet(&p, &mut rng).weights()[0]).collect()
}

#[test]
fn dirichlet_two_point_marginals() {
    let uniform = first_weights(1.0, 21);
    assert!(ks_test(&uniform, |d| d.clamp(0.0, 1.0), ALPHA).unwrap().passed());
    let arcsine = first_weights(0.5, 22);
    let cdf = |d: f64| FRAC_2_PI * d.clamp(0.0, 1.0).sqrt().asin();
    assert!(ks_test(&arcsine, cdf, ALPHA).unwrap().passed());
    assert!(!ks_test(&uniform, cdf, ALPHA).unwrap().passed());
}

#[test]
fn dirichlet_moments_and_sums() {
    for (nu, n) in [(0.5, 3), (2.0, 3), (1.0, 5)] {
        let p = DirichletParams::new(nu, n).unwrap();
        let mut rng = RngStream::new(23);
        let draws: Vec<Vec<f64>> = (0..N)
            .map(|_| sample_dirichlet(&p, &mut rng).weights().to_vec())
            .collect();
        for w in &draws {
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|&x| x >= 0.0));
        }
        for i in 0..n {
            let mean = draws.iter().map(|w| w[i]).sum::<f64>() / N as f64;
            let var = draws.iter().map(|w| (w[i] - mean).powi(2)).sum::<f64>() / (N - 1) as f64;
            let se = (p.variance() / N as f64).sqrt();
            assert!((mean - p.mean()).abs() < 4.0 * se, "nu={nu} n={n} i={i}");
            assert!((var / p.variance() - 1.0).abs() < 0.03, "nu={nu} n={n} i={i}");
        }
    }
}

#[test]
fn haar_angles() {
    let mut rng = RngStream::new(31);
    let draws: Vec<_> = (0..N).map(|_| sample_haar_su2(&mut rng)).collect();
    let cos_b: Vec<f64> = draws.iter().map(|e| e.beta().cos()).collect();
    assert!(ks_test(&cos_b, |c| ((c + 1.0) / 2.0).clamp(0.0, 1.0), ALPHA).unwrap().passed());
    let alpha: Vec<f64> = draws.iter().map(|e| e.alpha()).collect();
    assert!(ks_test(&alpha, |a| (a / TAU).clamp(0.0, 1.0), ALPHA).unwrap().passed());
    let gamma: Vec<f64> = draws.iter().map(|e| e.gamma()).collect();
    assert!(ks_test(&gamma, |a| (a / TAU).clamp(0.0, 1.0), ALPHA).unwrap().passed());
    // beta has density sin(beta)/2: mean pi/2, variance pi^2/4 - 2
    let mean = draws.iter().map(|e| e.beta()).sum::<f64>() / N as f64;
    let sigma = ((PI * PI / 4.0 - 2.0) / N as f64).sqrt();
    assert!((mean - PI / 2.0).abs() < 3.0 * sigma);
}

#[test]
fn zhsl_draws_are_states() {
    let mut rng = RngStream::new(41);
    for nu in [0.5, 1.0, 2.0, 5.0] {
        for _ in 0..5000 {
            assert!(sample_zhsl(nu, &mut rng).unwrap().is_density(1e-12));
        }
    }
    assert!(sample_zhsl(0.0, &mut rng).is_err());
}

#[test]
fn zhsl_radial_laws() {
    for (nu, seed) in [(0.5, 51), (1.0, 52), (2.0, 53), (5.0, 54)] {
        let r = verify_zhsl_radial(nu, N, seed, ALPHA).unwrap();
        assert!(r.passed(), "nu = {nu}: {r:?}");
    }
}

#[test]
fn batches_are_deterministic() {
    let a = sample_zhsl_batch(1.0, 5000, 7, 8).unwrap();
    let b = sample_zhsl_batch(1.0, 5000, 7, 8).unwrap();
    assert_eq!(a, b);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = pool.install(|| sample_zhsl_batch(1.0, 5000, 7, 8).unwrap());
    assert_eq!(a, c);
    assert_ne!(a, sample_zhsl_batch(1.0, 5000, 8, 8).unwrap());
}
