//! Method dispatch and the lower-bound harness.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::Mutex;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::montecarlo::k_montecarlo;
use super::sinc::{sinc_with_error, SincGrid};
use super::{k_exact_small_blocks, reduce, CoefficientEstimate, EstimateMeta, Method};
use crate::error::{Error, Result};
use crate::irwin_hall::value_at_zero;
use crate::partition::{enumerate_partitions, Partition};
use crate::rng::{fnv1a, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodPolicy {
    /// Exact rationals where the reduction allows, then sinc quadrature, then Monte Carlo.
    ExactFirst,
    /// Sinc quadrature, Monte Carlo when refused or too inaccurate.
    Quadrature,
    MonteCarlo,
}

impl FromStr for MethodPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::ExactFirst),
            "quadrature" => Ok(Self::Quadrature),
            "montecarlo" | "mc" => Ok(Self::MonteCarlo),
            _ => Err(Error::InvalidParameter(format!("unknown method policy `{s}` (exact|quadrature|montecarlo)"))),
        }
    }
}

/// Computes `K_{ρ,u}` under a policy. Sinc results are cached by reduced graph.
#[derive(Debug)]
pub struct CoefficientEngine {
    pub policy: MethodPolicy,
    pub samples: u64,
    pub grid: SincGrid,
    /// Sinc results with a larger error estimate fall back to Monte Carlo.
    pub sinc_tolerance: f64,
    pub seed: u64,
    cache: Mutex<HashMap<Vec<u32>, std::result::Result<(f64, f64), Error>>>,
}

impl CoefficientEngine {
    pub fn new(policy: MethodPolicy, seed: u64) -> Self {
        Self {
            policy,
            samples: 1_000_000,
            grid: SincGrid::default(),
            sinc_tolerance: 1e-5,
            seed,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    fn sinc(&self, p: &Partition) -> Result<CoefficientEstimate> {
        let red = reduce(p);
        let key = red.canonical_key();
        let cached = self.cache.lock().expect("cache poisoned").get(&key).cloned();
        let res = match cached {
            Some(r) => r,
            None => {
                let r = if red.is_trivial() { Ok((1.0, 0.0)) } else { sinc_with_error(&red, &self.grid) };
                self.cache.lock().expect("cache poisoned").insert(key, r.clone());
                r
            }
        };
        let (value, err) = res?;
        Ok(CoefficientEstimate {
            rgs: p.rgs_string(),
            value,
            exact: None,
            method: Method::SincQuadrature,
            stderr_or_bound: err,
            meta: EstimateMeta::Quadrature { truncation: self.grid.truncation, nodes_per_axis: 0 },
        })
    }

    fn montecarlo(&self, p: &Partition) -> Result<CoefficientEstimate> {
        let mut rng = stream(self.seed, "coefficients.montecarlo", fnv1a(p.rgs_string().as_bytes()));
        k_montecarlo(p, self.samples, &mut rng)
    }

    fn quadrature_then_mc(&self, p: &Partition) -> Result<CoefficientEstimate> {
        match self.sinc(p) {
            Ok(est) if est.stderr_or_bound <= self.sinc_tolerance => Ok(est),
            Ok(_) | Err(Error::CapExceeded { .. }) => self.montecarlo(p),
            Err(e) => Err(e),
        }
    }

    /// `K_{ρ,u}` for one partition.
    pub fn uniform(&self, p: &Partition) -> Result<CoefficientEstimate> {
        match self.policy {
            MethodPolicy::ExactFirst => match k_exact_small_blocks(p) {
                Some(v) => Ok(CoefficientEstimate::exact(p, v, Method::ExactIrwinHall)),
                None => self.quadrature_then_mc(p),
            },
            MethodPolicy::Quadrature => self.quadrature_then_mc(p),
            MethodPolicy::MonteCarlo => self.montecarlo(p),
        }
    }

    /// Method the policy tries first for `p`.
    pub fn primary_method(&self, p: &Partition) -> Method {
        match self.policy {
            MethodPolicy::ExactFirst if reduce(p).blocks() <= 3 => Method::ExactIrwinHall,
            MethodPolicy::ExactFirst | MethodPolicy::Quadrature => Method::SincQuadrature,
            MethodPolicy::MonteCarlo => Method::MonteCarloVolume,
        }
    }
}

/// `Π g^{(2n_j)}(0)` over the `r - 1` smallest blocks.
pub fn conjecture_bound(p: &Partition) -> BigRational {
    let mut sizes = p.block_sizes();
    sizes.sort_unstable();
    sizes.pop();
    sizes.iter().fold(BigRational::one(), |acc, &s| acc * value_at_zero(2 * s))
}

#[derive(Debug, Clone)]
pub struct HarnessRow {
    pub partition: Partition,
    pub estimate: CoefficientEstimate,
    pub bound: BigRational,
    pub violated: bool,
    /// The policy's first method did not produce the value.
    pub fallback: bool,
}

pub const HARNESS_MAX_N: usize = 8;

/// Compare `K_{ρ,u}` with the product bound for every partition of `{1..n}`.
pub fn conjecture_harness(n: usize, engine: &CoefficientEngine) -> Result<Vec<HarnessRow>> {
    if n > HARNESS_MAX_N {
        return Err(Error::CapExceeded { what: "conjecture harness", detail: format!("n = {n} exceeds {HARNESS_MAX_N}") });
    }
    let parts: Vec<Partition> = enumerate_partitions(n)?.collect();
    parts
        .into_par_iter()
        .map(|p| {
            let estimate = engine.uniform(&p)?;
            let bound = conjecture_bound(&p);
            let violated = match &estimate.exact {
                Some(v) => *v < bound,
                None => estimate.value < bound.to_f64().unwrap_or(0.0) - 5.0 * estimate.stderr_or_bound,
            };
            let fallback = estimate.method != engine.primary_method(&p);
            Ok(HarnessRow { partition: p, estimate, bound, violated, fallback })
        })
        .collect()
}
