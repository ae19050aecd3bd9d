//! Phase distributions: densities, power integrals, Fourier coefficients and sampling.
//!
//! `cargo run --example phase_distributions`

use vandermonde::phase::convexity_fourier_check;
use vandermonde::rng::stream;
use vandermonde::PhaseDistribution;

fn main() -> vandermonde::Result<()> {
    let specs = ["uniform", "power:alpha=0.5", "log", "ula:alpha=0.785,ratio=0.5", "arcsine"];
    println!("{:<28} {:>10} {:>10} {:>10} {:>12} {:>10}", "distribution", "p(0.5)", "∫p²", "∫p⁴", "sup", "a(1)");
    for spec in specs {
        let d: PhaseDistribution = spec.parse()?;
        println!(
            "{:<28} {:>10.5} {:>10.5} {:>10.4e} {:>12.4e} {:>10.5}",
            d.to_string(),
            d.density(0.5),
            d.density_power_integral(2),
            d.density_power_integral(4),
            d.sup_norm(),
            d.fourier_coefficient(1)
        );
    }

    // Sample moments against the density.
    let mut rng = stream(1, "example.phases", 0);
    for spec in specs {
        let d: PhaseDistribution = spec.parse()?;
        let xs = d.sample(&mut rng, 100_000);
        let second = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
        let max = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        println!("{spec:<28} E[θ²] ≈ {second:.4}  max|θ| = {max:.4}  support ±{:.4}", d.support_half_width());
    }

    // Even, convex, decreasing densities have nonnegative Fourier coefficients.
    for d in [PhaseDistribution::log_singular(), PhaseDistribution::power_law(0.5)?] {
        let ok = convexity_fourier_check(&d, 0..64, 1e-12)?;
        println!("{d}: Fourier coefficients a(0..64) nonnegative: {ok}");
    }
    Ok(())
}
