//! Structural invariants checked over generated inputs.

use num_bigint::BigUint;
use proptest::prelude::*;
use vandermonde::capacity::capacity_vandermonde;
use vandermonde::coefficients::{conjecture_bound, CoefficientEngine, MethodPolicy};
use vandermonde::counting::{bell, catalan, narayana, stirling2_row};
use vandermonde::equations::build_equations;
use vandermonde::irwin_hall::value_at_zero;
use vandermonde::maxeig::schur_row_bound;
use vandermonde::moments::limiting_moment;
use vandermonde::partition::enumerate_partitions;
use vandermonde::report::format_real;
use vandermonde::spectra::{build_kernel, sample_phases, spectrum_of};
use vandermonde::{Partition, PhaseDistribution};

/// Arbitrary labels normalised to a restricted growth string.
fn partition(max_n: usize) -> impl Strategy<Value = Partition> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(0..n, n)).prop_map(|labels| Partition::from_labels(&labels).unwrap())
}

fn dist() -> impl Strategy<Value = PhaseDistribution> {
    prop_oneof![
        Just(PhaseDistribution::uniform()),
        (0.2f64..0.9).prop_map(|a| PhaseDistribution::power_law(a).unwrap()),
        Just(PhaseDistribution::log_singular()),
        (0.3f64..1.4).prop_map(|a| PhaseDistribution::ula(a, 0.5).unwrap()),
        Just(PhaseDistribution::arcsine_like()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficient_is_rotation_invariant(p in partition(7), k in 0usize..7) {
        let e = CoefficientEngine::new(MethodPolicy::ExactFirst, 0);
        let a = e.uniform(&p).unwrap();
        let b = e.uniform(&p.rotate(k % p.n())).unwrap();
        prop_assert!(a.exact.is_some());
        prop_assert_eq!(a.exact, b.exact);
    }

    #[test]
    fn coefficient_in_unit_interval_and_above_bound(p in partition(7)) {
        let e = CoefficientEngine::new(MethodPolicy::ExactFirst, 0);
        let k = e.uniform(&p).unwrap().exact.unwrap();
        prop_assert!(k <= num_traits::One::one());
        prop_assert!(k >= conjecture_bound(&p));
        if p.is_noncrossing() {
            prop_assert!(num_traits::One::is_one(&k));
        }
    }

    #[test]
    fn equation_rows_telescope(p in partition(11)) {
        let eq = build_equations(&p).unwrap();
        prop_assert_eq!(eq.rows.len(), p.num_blocks());
        for row in &eq.rows {
            prop_assert_eq!(row.iter().sum::<i64>(), 0);
        }
        for i in 0..p.n() {
            prop_assert_eq!(eq.rows.iter().map(|r| r[i]).sum::<i64>(), 0);
        }
        prop_assert_eq!(eq.dependent.len() + 1, p.num_blocks());
        prop_assert_eq!(eq.free.len() + eq.dependent.len(), p.n());
    }

    #[test]
    fn rgs_round_trips(p in partition(12)) {
        prop_assert_eq!(Partition::parse_rgs(&p.rgs_string()).unwrap(), p.clone());
        prop_assert_eq!(Partition::from_blocks(p.n(), &p.blocks()).unwrap(), p.clone());
        prop_assert_eq!(p.rotate(p.n()), p.clone());
        prop_assert_eq!(p.block_sizes().iter().sum::<usize>(), p.n());
    }

    #[test]
    fn spectrum_invariants(n in 1usize..40, extra in 0usize..20, seed in any::<u64>(), d in dist()) {
        let l = n + extra;
        let phases = sample_phases(&d, l, seed, 0);
        let ev = spectrum_of(n, &phases).unwrap();
        prop_assert_eq!(ev.len(), l);
        prop_assert!(ev[0] >= -1e-8);
        let trace: f64 = ev.iter().sum();
        prop_assert!((trace - l as f64).abs() < 1e-8 * l as f64);
        if l == n {
            let top = *ev.last().unwrap();
            prop_assert!(top >= 1.0 - 1e-9 && top <= n as f64 + 1e-9);
            prop_assert!(top <= schur_row_bound(&build_kernel(n, &phases).matrix) + 1e-9);
        }
    }

    #[test]
    fn phases_lie_in_support(d in dist(), seed in any::<u64>()) {
        let h = d.support_half_width();
        prop_assert!(sample_phases(&d, 200, seed, 1).iter().all(|x| x.abs() <= h));
    }

    #[test]
    fn jensen_dominance(d in dist(), n in 1usize..6, c in 0.1f64..3.0) {
        let e = CoefficientEngine::new(MethodPolicy::ExactFirst, 0);
        let u = limiting_moment(n, c, &PhaseDistribution::uniform(), 1, &e).unwrap().value;
        match limiting_moment(n, c, &d, 1, &e) {
            Ok(v) => prop_assert!(v.value >= u * (1.0 - 1e-9)),
            Err(_) => prop_assert!(!d.density_power_integral(n as u32).is_finite()),
        }
    }

    #[test]
    fn real_format_round_trips(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn capacity_monotone_per_sample(seed in any::<u64>()) {
        let g: Vec<f64> = (0..8).map(|k| k as f64).collect();
        let c = capacity_vandermonde(&PhaseDistribution::uniform(), 12, 12, &g, 1, seed).unwrap();
        prop_assert!(c.vandermonde.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn counting_identities() {
    for n in 1..=12usize {
        let parts: Vec<Partition> = enumerate_partitions(n).unwrap().collect();
        assert_eq!(BigUint::from(parts.len()), bell(n));
        let nc = parts.iter().filter(|p| p.is_noncrossing()).count();
        assert_eq!(BigUint::from(nc), catalan(n));
        let row = stirling2_row(n);
        assert_eq!(row.iter().sum::<BigUint>(), bell(n));
        let nar: BigUint = (1..=n).map(|k| narayana(k, n).unwrap()).sum();
        assert_eq!(nar, catalan(n));
        for k in 1..=n {
            let count = parts.iter().filter(|p| p.num_blocks() == k && p.is_noncrossing()).count();
            assert_eq!(BigUint::from(count), narayana(k, n).unwrap());
        }
    }
}

#[test]
fn irwin_hall_peak_decreases() {
    for m in 1..20 {
        assert!(value_at_zero(m + 1) < value_at_zero(m) || m == 1);
    }
}

#[test]
fn moment_polynomial_small_c() {
    let e = CoefficientEngine::new(MethodPolicy::ExactFirst, 0);
    for n in 1..=6 {
        let v = limiting_moment(n, 1e-9, &PhaseDistribution::uniform(), 1, &e).unwrap().value;
        assert!((v - 1.0).abs() < 1e-6);
    }
}
