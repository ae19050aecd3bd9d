//! Capacity of the Vandermonde channel, with the Jensen bound and the Gaussian closed form.
//!
//! `cargo run --example capacity_curves`

use std::f64::consts::PI;

use vandermonde::capacity::{capacity_gaussian, capacity_vandermonde, gaussian_logdet_simulation, Units};
use vandermonde::PhaseDistribution;

fn main() -> vandermonde::Result<()> {
    let gammas: Vec<f64> = (0..=10).map(|k| 2.0 * k as f64).collect();
    let mut dists = vec![("uniform".to_string(), PhaseDistribution::uniform())];
    for (label, a) in [("π/8", PI / 8.0), ("π/4", PI / 4.0), ("π/3", PI / 3.0)] {
        dists.push((format!("ULA α={label}"), PhaseDistribution::ula(a, 0.5)?));
    }
    let curves = dists
        .iter()
        .map(|(_, d)| capacity_vandermonde(d, 64, 64, &gammas, 40, 2).map(|c| c.in_units(Units::Bits)))
        .collect::<vandermonde::Result<Vec<_>>>()?;

    print!("{:>5}", "γ");
    for (name, _) in &dists {
        print!(" {name:>12}");
    }
    println!(" {:>10} {:>10}", "jensen", "gaussian");
    for k in 0..gammas.len() {
        print!("{:>5}", gammas[k]);
        for c in &curves {
            print!(" {:>12.4}", c.vandermonde[k]);
        }
        println!(" {:>10.4} {:>10.4}", curves[0].jensen[k], curves[0].gaussian[k]);
    }

    let sim = gaussian_logdet_simulation(500, 500, &[1.0, 10.0], 3)?;
    for (g, s) in [1.0, 10.0].iter().zip(sim) {
        println!("Gaussian β=1, γ={g}: closed form {:.5} nats, 500×500 sample {s:.5}", capacity_gaussian(*g, 1.0)?);
    }
    Ok(())
}
