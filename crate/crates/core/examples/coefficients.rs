//! Expansion coefficients by every method, and the conjecture harness.
//!
//! `cargo run --example coefficients`

use vandermonde::coefficients::{
    conjecture_harness, k_closed_form_pairs, k_exact_small_blocks, k_finite_n, k_for_distribution, k_montecarlo,
    k_sinc_quadrature, CoefficientEngine, MethodPolicy, SincGrid,
};
use vandermonde::rng::stream;
use vandermonde::{Partition, PhaseDistribution};

fn main() -> vandermonde::Result<()> {
    let grid = SincGrid::default();
    let cases = ["0101", "010101", "012012", "01230123", "01020102"];
    println!("{:<10} {:>12} {:>12} {:>18} {:>12}", "rgs", "exact", "sinc", "monte carlo", "N = 16");
    for rgs in cases {
        let p = Partition::parse_rgs(rgs)?;
        let exact = k_exact_small_blocks(&p).map_or("-".to_string(), |v| v.to_string());
        let sq = k_sinc_quadrature(&p, &grid)?;
        let mc = k_montecarlo(&p, 200_000, &mut stream(3, "example.mc", 0))?;
        let fin = k_finite_n(&p, 16).map_or("-".to_string(), |k| format!("{:.6}", k.value));
        println!(
            "{rgs:<10} {exact:>12} {:>12.8} {:>9.5} ± {:.5} {fin:>12}",
            sq.value, mc.value, mc.stderr_or_bound
        );
    }
    println!("pairs family 2/(n+1): {:?}", (1..=6).map(|n| k_closed_form_pairs(n).map(|v| v.to_string())).collect::<Result<Vec<_>, _>>()?);

    let engine = CoefficientEngine::new(MethodPolicy::ExactFirst, 0);
    let base = engine.uniform(&Partition::parse_rgs("0101")?)?;
    for d in [PhaseDistribution::power_law(0.5)?, PhaseDistribution::arcsine_like()] {
        match k_for_distribution(&Partition::parse_rgs("0101")?, &d, &base) {
            Ok(k) => println!("K(0101) under {d}: {:.6}", k.value),
            Err(e) => println!("K(0101) under {d}: {e}"),
        }
    }

    for n in 4..=7 {
        let rows = conjecture_harness(n, &engine)?;
        let crossing = rows.iter().filter(|r| !r.partition.is_noncrossing()).count();
        let min = rows.iter().map(|r| r.estimate.value).fold(1.0, f64::min);
        let violations = rows.iter().filter(|r| r.violated).count();
        println!("n={n}: {} partitions, {crossing} crossing, min K = {min:.6}, violations {violations}", rows.len());
    }
    Ok(())
}
