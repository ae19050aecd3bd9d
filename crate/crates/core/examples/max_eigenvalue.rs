//! Largest eigenvalue against the log N / log log N and C log N curves.
//!
//! `cargo run --example max_eigenvalue`

use vandermonde::maxeig::{maxeig_experiment, tail_table, upper_bound_constant};
use vandermonde::PhaseDistribution;

fn main() -> vandermonde::Result<()> {
    let u = PhaseDistribution::uniform();
    println!("upper constant for uniform phases: C = {:.6}", upper_bound_constant(&u)?);
    let rows = maxeig_experiment(&u, &[25, 50, 100, 200], 200, 5)?;
    println!("{:>4} {:>9} {:>8} {:>9} {:>9}", "N", "mean", "std", "lower", "upper");
    for r in &rows {
        println!("{:>4} {:>9.4} {:>8.4} {:>9.4} {:>9.4}", r.n, r.mean, r.std, r.lower, r.upper);
    }

    let last = rows.last().expect("grid is nonempty");
    let t = tail_table(&u, last.n, &last.samples, &[0.0, 0.5], &[0.0, 1.0, 2.0])?;
    for row in &t.rows {
        println!("ε={} u={} threshold {:.3}: frequency {:.4}", row.epsilon, row.u, row.threshold, row.frequency);
    }

    let p = PhaseDistribution::power_law(0.5)?;
    for r in maxeig_experiment(&p, &[100, 400], 100, 5)? {
        println!("{}: N={} mean {:.3}, growth reference {:.3}", r.dist, r.n, r.mean, r.growth_reference.unwrap_or(f64::NAN));
    }
    Ok(())
}
