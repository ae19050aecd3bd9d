//! Limiting moments with their combinatorial bounds, for both coefficient conventions.
//!
//! `cargo run --example moment_tables`

use num_traits::ToPrimitive;
use vandermonde::coefficients::{CoefficientEngine, MethodPolicy};
use vandermonde::moments::{carleman_check, harper_sandwich, limiting_moment, moment_table};
use vandermonde::PhaseDistribution;

fn main() -> vandermonde::Result<()> {
    let u = PhaseDistribution::uniform();
    let engine = CoefficientEngine::new(MethodPolicy::ExactFirst, 0);
    for d in [1, 2] {
        println!("d = {d}");
        println!("{:>2} {:>6} {:>14} {:>14} {:>14} {:>6}", "n", "C_n", "L_n", "m_n", "exact", "B_n");
        for r in moment_table(7, 1.0, &u, d, &engine)? {
            println!(
                "{:>2} {:>6} {:>14.6} {:>14.6} {:>14} {:>6}",
                r.n,
                r.catalan,
                r.lower.to_f64().unwrap_or(f64::NAN),
                r.moment.value,
                r.moment.exact.map_or("-".into(), |v| v.to_string()),
                r.bell
            );
        }
    }

    println!("\nm_4 as a function of c:");
    for c in [0.25, 0.5, 1.0, 2.0] {
        println!("  c = {c:<4} m_4 = {:.6}", limiting_moment(4, c, &u, 1, &engine)?.value);
    }

    println!("\nm_4 for other phase laws (c = 1):");
    for spec in ["power:alpha=0.5", "ula:alpha=1.0,ratio=0.5", "arcsine"] {
        let d: PhaseDistribution = spec.parse()?;
        match limiting_moment(4, 1.0, &d, 1, &engine) {
            Ok(m) => println!("  {spec:<26} {:.6}", m.value),
            Err(e) => println!("  {spec:<26} {e}"),
        }
    }

    let ms: Vec<f64> = (1..=7).map(|n| limiting_moment(n, 1.0, &u, 1, &engine).map(|m| m.value)).collect::<Result<_, _>>()?;
    println!("\nmoments below the (2π‖p‖∞ max(1,c))ⁿ Bₙ envelope: {}", carleman_check(&ms, &u, 1.0));
    for n in [10, 20, 30] {
        let (lo, b) = harper_sandwich(n)?;
        println!("n={n}: asymptotic lower {lo:.4e} <= B_n = {b}");
    }
    Ok(())
}
