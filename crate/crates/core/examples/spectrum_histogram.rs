//! Eigenvalue histograms of V*V for uniform and log-singular phases.
//!
//! `cargo run --example spectrum_histogram`

use vandermonde::spectra::{histogram, sample_spectra};
use vandermonde::PhaseDistribution;

fn main() -> vandermonde::Result<()> {
    let (n, trials) = (300, 40);
    for spec in ["uniform", "log"] {
        let d: PhaseDistribution = spec.parse()?;
        let spectra = sample_spectra(&d, n, n, trials, 7)?;
        let h = histogram(&spectra, 0.25, 0.0, 6.0)?;
        println!("{spec}, N = L = {n}, {trials} trials");
        for (a, b, m) in h.bins() {
            println!("  [{a:4.2}, {b:4.2}) {m:6.4} {}", "#".repeat((m * 200.0).round() as usize));
        }
        let q99 = spectra.iter().map(|s| s.quantile(0.99)).sum::<f64>() / trials as f64;
        let zero = spectra.iter().map(|s| s.fraction_below(0.01)).sum::<f64>() / trials as f64;
        let m4 = spectra.iter().map(|s| s.trace_moment(4)).sum::<f64>() / trials as f64;
        println!("  99th percentile {q99:.3}, mass below 0.01 {zero:.4}, tr(V*V)^4 {m4:.3}\n");
    }
    Ok(())
}
