//! Expansion coefficients `K_{ρ,u}` and `K_{ρ,ν}`.
//!
//! Every method starts from the reduced form of a partition. Read the block
//! labels around the circle `1, 2, ..., n, 1`; two cyclically adjacent equal
//! labels contribute a factor `G(0) = 1` and merge, and an element forming a
//! singleton block sits between its neighbours as `G ∗ G = G`, so it can be
//! dropped. Repeating both steps leaves a word in which every label occurs at
//! least twice and no two neighbours agree. The transition counts between label
//! pairs of that word define a multigraph whose sinc integral is `K_{ρ,u}`.

pub mod exact;
pub mod finite_n;
pub mod harness;
pub mod montecarlo;
pub mod sinc;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::phase::PhaseDistribution;

pub use exact::{k_closed_form_alternating, k_closed_form_pairs, k_exact_small_blocks};
pub use finite_n::k_finite_n;
pub use harness::{conjecture_bound, conjecture_harness, CoefficientEngine, HarnessRow, MethodPolicy};
pub use montecarlo::k_montecarlo;
pub use sinc::{k_sinc_quadrature, SincGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    ClosedForm,
    ExactIrwinHall,
    SincQuadrature,
    MonteCarloVolume,
    FiniteN,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::ExactIrwinHall => "exact",
            Method::SincQuadrature => "sinc",
            Method::MonteCarloVolume => "montecarlo",
            Method::FiniteN => "finite-n",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EstimateMeta {
    None,
    Samples(u64),
    Quadrature { truncation: f64, nodes_per_axis: usize },
    Dimension(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientEstimate {
    pub rgs: String,
    pub value: f64,
    pub exact: Option<BigRational>,
    pub method: Method,
    /// Binomial standard error for Monte Carlo, an error bound otherwise.
    pub stderr_or_bound: f64,
    pub meta: EstimateMeta,
}

impl CoefficientEstimate {
    pub(crate) fn exact(p: &Partition, v: BigRational, method: Method) -> Self {
        use num_traits::ToPrimitive;
        Self {
            rgs: p.rgs_string(),
            value: v.to_f64().unwrap_or(f64::NAN),
            exact: Some(v),
            method,
            stderr_or_bound: 0.0,
            meta: EstimateMeta::None,
        }
    }
}

/// Cyclic label word left after reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Labels relabelled by first occurrence; empty when the coefficient is 1.
    pub word: Vec<usize>,
}

impl Reduction {
    pub fn blocks(&self) -> usize {
        self.word.iter().copied().max().map_or(1, |m| m + 1)
    }

    pub fn is_trivial(&self) -> bool {
        self.word.is_empty()
    }

    /// The reduced word as a partition; a single point when trivial.
    pub fn partition(&self) -> Partition {
        if self.word.is_empty() {
            Partition::single_block(1)
        } else {
            Partition::from_labels(&self.word).expect("reduced word is nonempty")
        }
    }

    /// Cyclic transition counts between distinct labels.
    pub fn edges(&self) -> BTreeMap<(usize, usize), u32> {
        let mut out = BTreeMap::new();
        let n = self.word.len();
        for i in 0..n {
            let a = self.word[i];
            let b = self.word[(i + 1) % n];
            if a != b {
                *out.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        out
    }

    /// Relabelling-invariant key of the edge multigraph, for caching.
    pub fn canonical_key(&self) -> Vec<u32> {
        let r = self.blocks();
        let edges = self.edges();
        let encode = |perm: &[usize]| {
            let mut m = vec![0u32; r * r];
            for (&(a, b), &e) in &edges {
                let (x, y) = (perm[a], perm[b]);
                m[x.min(y) * r + x.max(y)] = e;
            }
            m
        };
        let mut head = vec![r as u32];
        if self.word.is_empty() || r > 7 {
            head.extend(self.word.iter().map(|&l| l as u32));
            return head;
        }
        let mut perm: Vec<usize> = (0..r).collect();
        let mut best = encode(&perm);
        while next_permutation(&mut perm) {
            let c = encode(&perm);
            if c < best {
                best = c;
            }
        }
        head.extend(best);
        head
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn reduce(p: &Partition) -> Reduction {
    let mut word: Vec<usize> = p.rgs().iter().map(|&b| b as usize).collect();
    loop {
        let before = word.len();
        word.dedup();
        while word.len() > 1 && word.first() == word.last() {
            word.pop();
        }
        if word.len() == 1 {
            word.clear();
        }
        let mut counts = BTreeMap::new();
        for &l in &word {
            *counts.entry(l).or_insert(0usize) += 1;
        }
        word.retain(|l| counts[l] > 1);
        if word.len() == before {
            break;
        }
    }
    let mut map = BTreeMap::new();
    let word = word
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect();
    Reduction { word }
}

/// Scale a uniform coefficient to `K_{ρ,ν} = K_{ρ,u}(2π)^{r-1}∫p^r`, `r` the block
/// count of `p` itself.
pub fn k_for_distribution(p: &Partition, dist: &PhaseDistribution, base: &CoefficientEstimate) -> Result<CoefficientEstimate> {
    let r = p.num_blocks();
    if dist.is_uniform() {
        return Ok(base.clone());
    }
    let integral = dist.density_power_integral(r as u32);
    if !integral.is_finite() {
        return Err(Error::CoefficientDoesNotExist { r });
    }
    let scale = (2.0 * std::f64::consts::PI).powi(r as i32 - 1) * integral;
    Ok(CoefficientEstimate {
        rgs: base.rgs.clone(),
        value: base.value * scale,
        exact: None,
        method: base.method,
        stderr_or_bound: base.stderr_or_bound * scale,
        meta: base.meta.clone(),
    })
}
