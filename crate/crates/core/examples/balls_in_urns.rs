//! Maximum urn occupancy compared with the k_N = log N / log log N scale.
//!
//! `cargo run --example balls_in_urns`

use vandermonde::maxeig::{balls_in_urns, occupancy_scale};

fn main() -> vandermonde::Result<()> {
    for n in [100usize, 1_000, 10_000, 100_000] {
        let law = balls_in_urns(n, n, 300, 11)?;
        let k = occupancy_scale(n as f64)?;
        let dist: Vec<String> = law
            .counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(m, c)| format!("{m}:{c}"))
            .collect();
        println!(
            "N={n:<6} k_N={k:.3}  P(M > 1.5 k_N)={:.3}  P(M > 0.5 k_N)={:.3}  loads {}",
            law.frequency_above(1.5 * k),
            law.frequency_above(0.5 * k),
            dist.join(" ")
        );
    }
    Ok(())
}
