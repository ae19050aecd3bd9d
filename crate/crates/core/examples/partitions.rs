//! Set partitions: enumeration, counting sequences and the equations of a partition.
//!
//! `cargo run --example partitions`

use vandermonde::counting::{bell, catalan, harper_stats, narayana, stirling2_row};
use vandermonde::equations::build_equations;
use vandermonde::partition::enumerate_partitions;
use vandermonde::Partition;

fn main() -> vandermonde::Result<()> {
    println!("partitions of {{1,2,3,4}}:");
    for p in enumerate_partitions(4)? {
        let kind = if p.is_noncrossing() { "non-crossing" } else { "crossing" };
        println!("  {}  {:<22} {kind}", p.rgs_string(), p.to_string());
    }

    println!("\n n   Bell  Catalan  Stirling row / Narayana row");
    for n in 1..=8 {
        let s: Vec<String> = stirling2_row(n)[1..].iter().map(|v| v.to_string()).collect();
        let t: Vec<String> = (1..=n).map(|k| narayana(k, n).map(|v| v.to_string())).collect::<Result<_, _>>()?;
        println!("{n:>2} {:>6} {:>8}  [{}] / [{}]", bell(n), catalan(n), s.join(" "), t.join(" "));
    }

    let p = Partition::from_blocks(10, &[vec![1, 5, 7], vec![2, 4, 6, 8], vec![3, 9, 10]])?;
    println!("\nequations of {p}:");
    print!("{}", build_equations(&p)?);

    println!("\nblock-count concentration:");
    for n in [10, 20, 40] {
        let h = harper_stats(n)?;
        println!("  n={n:<3} σ = {:.4}  modal k = {}  n/(e log n) = {:.3}", h.sigma, h.modal_k, h.j_estimate);
    }
    Ok(())
}
