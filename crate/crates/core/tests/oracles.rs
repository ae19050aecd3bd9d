//! Library results against independently computed reference values.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use statrs::distribution::{DiscreteCDF, Poisson};
use vandermonde::capacity::{capacity_gaussian, gaussian_f};
use vandermonde::coefficients::{k_finite_n, k_exact_small_blocks, CoefficientEngine, MethodPolicy};
use vandermonde::irwin_hall::value_at_zero;
use vandermonde::linalg::{eigenvalues_symmetric, SymmetricMatrix};
use vandermonde::maxeig::{balls_in_urns, dirichlet_abs, staircase_bound};
use vandermonde::moments::limiting_moment;
use vandermonde::rng::stream;
use vandermonde::spectra::build_kernel;
use vandermonde::{Partition, PhaseDistribution};

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn irwin_hall_at_zero_table() {
    // Truncated-power sums evaluated with Python fractions.
    let table = [
        (1, 1, 1),
        (2, 1, 1),
        (3, 3, 4),
        (4, 2, 3),
        (5, 115, 192),
        (6, 11, 20),
        (7, 5887, 11520),
        (8, 151, 315),
        (9, 259723, 573440),
        (10, 15619, 36288),
        (12, 655177, 1663200),
    ];
    for (m, a, b) in table {
        assert_eq!(value_at_zero(m), rat(a, b), "m = {m}");
    }
    // Central-limit value √(6/π)·m^{-1/2}: within 3% at m = 2 and m ≥ 6; the
    // relative errors at m = 3, 4, 5 are 6.4%, 3.6%, 3.2%.
    let rel: Vec<f64> = (2..=40usize)
        .map(|m| {
            let v: f64 = num_traits::ToPrimitive::to_f64(&value_at_zero(m)).unwrap();
            (v - (6.0 / std::f64::consts::PI / m as f64).sqrt()).abs() / v
        })
        .collect();
    assert!(rel[0] < 0.03);
    assert!(rel[4..].iter().all(|&e| e < 0.03));
    assert!(rel[1..4].iter().all(|&e| e < 0.065));
    assert!(rel[1..].windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn table_moments_exact() {
    let e = CoefficientEngine::new(MethodPolicy::ExactFirst, 0);
    let u = PhaseDistribution::uniform();
    let expect = [(6, rat(3571, 20)), (7, rat(2141, 3))];
    for (n, m) in expect {
        assert_eq!(limiting_moment(n, 1.0, &u, 1, &e).unwrap().exact, Some(m));
    }
}

#[test]
fn finite_n_two_block_closed_form() {
    let p = Partition::parse_rgs("0101").unwrap();
    for n in [2usize, 3, 5, 8, 16, 40] {
        let nf = n as f64;
        let oracle = (nf - 1.0) * (2.0 * nf.powi(3) + nf) / (3.0 * nf.powi(4));
        let k = k_finite_n(&p, n).unwrap();
        assert!((k.value - oracle).abs() < 1e-10, "N = {n}: {} vs {oracle}", k.value);
    }
    assert_eq!(k_exact_small_blocks(&p), Some(rat(2, 3)));
}

#[test]
fn eigenvalues_match_nalgebra() {
    let mut rng = stream(5, "test.eig", 0);
    for n in [1usize, 2, 7, 30, 64] {
        let phases: Vec<f64> = (0..n).map(|_| rng.random_range(-3.14..3.14)).collect();
        let k = build_kernel(n, &phases);
        let ours = eigenvalues_symmetric(&k.matrix).unwrap();
        let dm = DMatrix::from_fn(n, n, |i, j| k.matrix.get(i, j));
        let mut theirs: Vec<f64> = dm.symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-10, "n = {n}: {a} vs {b}");
        }
    }
    let m = SymmetricMatrix::from_row_major(2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
    assert_eq!(eigenvalues_symmetric(&m).unwrap().len(), 2);
}

#[test]
fn gaussian_closed_form_unit_ratio() {
    // β = 1: F = (√(4γ+1) − 1)², and the capacity collapses to
    // 2 log((1 + √(4γ+1))/2) − F/(4γ).
    for g in [0.25, 1.0, 5.0, 10.0, 100.0] {
        let s = (4.0 * g + 1.0f64).sqrt();
        let f = (s - 1.0).powi(2);
        assert!((gaussian_f(g, 1.0) - f).abs() < 1e-12);
        let oracle = 2.0 * ((1.0 + s) / 2.0).ln() - f / (4.0 * g);
        assert!((capacity_gaussian(g, 1.0).unwrap() - oracle).abs() < 1e-12, "γ = {g}");
    }
}

#[test]
fn occupancy_against_poisson_approximation() {
    // P(M ≤ m) ≈ P(Poisson(λ) ≤ m)^urns for balls/urns = λ.
    let (balls, urns, trials) = (2000usize, 2000usize, 400usize);
    let law = balls_in_urns(balls, urns, trials, 3).unwrap();
    let pois = Poisson::new(1.0).unwrap();
    for m in 3..=8u64 {
        let oracle = 1.0 - pois.cdf(m).powi(urns as i32);
        let empirical = law.frequency_above(m as f64);
        let sd = (oracle * (1.0 - oracle) / trials as f64).sqrt().max(0.01);
        assert!((empirical - oracle).abs() < 5.0 * sd + 0.03, "m = {m}: {empirical} vs {oracle}");
    }
}

#[test]
fn staircase_dominates_dirichlet() {
    let mut rng = stream(11, "test.staircase", 0);
    for n in [8usize, 32, 128] {
        for _ in 0..100_000 {
            let x: f64 = rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI);
            assert!(dirichlet_abs(n, x) <= staircase_bound(n, x) + 1e-12, "N = {n}, x = {x}");
        }
    }
}
