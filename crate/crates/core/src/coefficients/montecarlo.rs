use rand::Rng;

use super::{reduce, CoefficientEstimate, EstimateMeta, Method};
use crate::equations::{build_equations, PartitionEquations};
use crate::error::{Error, Result};
use crate::partition::Partition;

pub const MIN_SAMPLES: u64 = 1000;

/// Count samples of the free variables (uniform on `[-1/2, 1/2]`) for which every
/// dependent variable lands in `[-1/2, 1/2]`, with all targets at 0.
pub fn montecarlo_volume<R: Rng + ?Sized>(eqs: &PartitionEquations, samples: u64, rng: &mut R) -> u64 {
    let mut m = vec![0.0f64; eqs.n];
    let mut accepted = 0;
    for _ in 0..samples {
        for &f in &eqs.free {
            m[f] = rng.random::<f64>() - 0.5;
        }
        let ok = eqs.dependent.iter().all(|d| {
            let v: f64 = d.free_coeffs.iter().map(|&(k, c)| c as f64 * m[k]).sum();
            (-0.5..=0.5).contains(&v)
        });
        if ok {
            accepted += 1;
        }
    }
    accepted
}

/// Monte Carlo volume of the solution set of the reduced partition's equations.
pub fn k_montecarlo<R: Rng + ?Sized>(p: &Partition, samples: u64, rng: &mut R) -> Result<CoefficientEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("Monte Carlo needs at least {MIN_SAMPLES} samples, got {samples}")));
    }
    let red = reduce(p);
    let accepted = if red.is_trivial() {
        samples
    } else {
        montecarlo_volume(&build_equations(&red.partition())?, samples, rng)
    };
    let q = accepted as f64 / samples as f64;
    Ok(CoefficientEstimate {
        rgs: p.rgs_string(),
        value: q,
        exact: None,
        method: Method::MonteCarloVolume,
        stderr_or_bound: (q * (1.0 - q) / samples as f64).sqrt(),
        meta: EstimateMeta::Samples(samples),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn crossing_pair() {
        let mut rng = stream(11, "test", 0);
        let k = k_montecarlo(&Partition::parse_rgs("0101").unwrap(), 200_000, &mut rng).unwrap();
        assert!((k.value - 2.0 / 3.0).abs() < 4.0 * k.stderr_or_bound, "{k:?}");
        let k = k_montecarlo(&Partition::parse_rgs("0110").unwrap(), 1000, &mut rng).unwrap();
        assert_eq!(k.value, 1.0);
        assert!(k_montecarlo(&Partition::parse_rgs("0101").unwrap(), 10, &mut rng).is_err());
    }

    #[test]
    fn unreduced_equations_agree() {
        // The reduction must not change the volume.
        let p = Partition::parse_rgs("010213").unwrap();
        let eqs = build_equations(&p).unwrap();
        let mut rng = stream(5, "test", 1);
        let n = 200_000;
        let q = montecarlo_volume(&eqs, n, &mut rng) as f64 / n as f64;
        let k = k_montecarlo(&p, n, &mut rng).unwrap();
        assert!((q - k.value).abs() < 5.0 * k.stderr_or_bound * 2f64.sqrt(), "{q} vs {}", k.value);
    }
}
