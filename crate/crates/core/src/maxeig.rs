//! Largest eigenvalue: bound curves, experiments and the occupancy simulator.

use std::f64::consts::{E, PI};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_symmetric, SymmetricMatrix};
use crate::phase::{PhaseDistribution, PhaseKind};
use crate::rng::stream;
use crate::spectra::{build_kernel, dirichlet_normalized, sample_phases};

/// `C = 4π‖f‖_∞(e − 1) + 1`.
pub fn upper_bound_constant(dist: &PhaseDistribution) -> Result<f64> {
    upper_bound_constant_for_sup(dist.sup_norm())
}

pub fn upper_bound_constant_for_sup(sup: f64) -> Result<f64> {
    if !sup.is_finite() {
        return Err(Error::BoundInapplicable("the upper bound needs a bounded density".into()));
    }
    Ok(4.0 * PI * sup * (E - 1.0) + 1.0)
}

/// `max_i Σ_j |a_ij|`.
pub fn schur_row_bound(m: &SymmetricMatrix) -> f64 {
    (0..m.dim()).map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `log N / log log N`.
pub fn lower_bound_curve(n: f64) -> Result<f64> {
    if !(n >= 3.0) {
        return Err(Error::InvalidParameter(format!("lower bound curve needs N ≥ 3, got {n}")));
    }
    Ok(n.ln() / n.ln().ln())
}

/// Step function dominating `|D_N(x)|`: `1/k` on `[2π(k−1)/N, 2πk/N)`.
pub fn staircase_bound(n: usize, x: f64) -> f64 {
    let k = (x.abs() * n as f64 / (2.0 * PI)).floor() + 1.0;
    if k > (n as f64 / 2.0).ceil() {
        0.0
    } else {
        1.0 / k
    }
}

/// `|D_N(x)|` with the normalisation of the kernel matrix.
pub fn dirichlet_abs(n: usize, x: f64) -> f64 {
    dirichlet_normalized(n, x).abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxEigSample {
    pub lambda_max: f64,
    pub schur_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxEigExperimentRow {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    /// `C log N`, `NaN` when the density is unbounded.
    pub upper: f64,
    pub lower: f64,
    /// `N^α / 2^{2−α}` for power-law phases.
    pub growth_reference: Option<f64>,
    pub dist: String,
    pub samples: Vec<MaxEigSample>,
}

fn one_trial(dist: &PhaseDistribution, n: usize, seed: u64, trial: u64) -> Result<MaxEigSample> {
    let phases = sample_phases(dist, n, seed ^ (n as u64).rotate_left(32), trial);
    let k = build_kernel(n, &phases);
    let ev = eigenvalues_symmetric(&k.matrix)?;
    Ok(MaxEigSample { lambda_max: ev.last().copied().unwrap_or(0.0), schur_bound: schur_row_bound(&k.matrix) })
}

pub fn maxeig_samples(dist: &PhaseDistribution, n: usize, trials: usize, seed: u64) -> Result<Vec<MaxEigSample>> {
    (0..trials as u64).into_par_iter().map(|t| one_trial(dist, n, seed, t)).collect()
}

pub fn maxeig_experiment(dist: &PhaseDistribution, grid: &[usize], trials: usize, seed: u64) -> Result<Vec<MaxEigExperimentRow>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let c = upper_bound_constant(dist).ok();
    grid.iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::InvalidParameter("N must be at least 1".into()));
            }
            let samples = maxeig_samples(dist, n, trials, seed)?;
            let mean = samples.iter().map(|s| s.lambda_max).sum::<f64>() / trials as f64;
            let var = if trials > 1 {
                samples.iter().map(|s| (s.lambda_max - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0)
            } else {
                0.0
            };
            let nf = n as f64;
            let growth_reference = match dist.kind() {
                PhaseKind::PowerLaw { alpha } => Some(nf.powf(*alpha) / 2f64.powf(2.0 - alpha)),
                _ => None,
            };
            Ok(MaxEigExperimentRow {
                n,
                trials,
                mean,
                std: var.sqrt(),
                upper: c.map_or(f64::NAN, |c| c * nf.ln()),
                lower: lower_bound_curve(nf).unwrap_or(f64::NAN),
                growth_reference,
                dist: dist.to_string(),
                samples,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyLaw {
    pub balls: usize,
    pub urns: usize,
    /// `counts[m]` = number of trials with maximum load `m`.
    pub counts: Vec<u64>,
    pub trials: usize,
}

impl OccupancyLaw {
    pub fn frequency_above(&self, x: f64) -> f64 {
        let hits: u64 = self.counts.iter().enumerate().filter(|(m, _)| *m as f64 > x).map(|(_, c)| c).sum();
        hits as f64 / self.trials as f64
    }

    pub fn min(&self) -> usize {
        self.counts.iter().position(|&c| c > 0).unwrap_or(0)
    }
}

/// `k_N = log N / log log N` for the occupancy scale.
pub fn occupancy_scale(n: f64) -> Result<f64> {
    lower_bound_curve(n)
}

pub fn balls_in_urns(balls: usize, urns: usize, trials: usize, seed: u64) -> Result<OccupancyLaw> {
    if balls == 0 || urns == 0 || trials == 0 {
        return Err(Error::InvalidParameter("balls, urns and trials must be at least 1".into()));
    }
    let maxima: Vec<usize> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, "maxeig.urns", t);
            let mut load = vec![0u32; urns];
            for _ in 0..balls {
                load[rng.random_range(0..urns)] += 1;
            }
            load.into_iter().max().unwrap_or(0) as usize
        })
        .collect();
    let top = maxima.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0u64; top + 1];
    for m in maxima {
        counts[m] += 1;
    }
    Ok(OccupancyLaw { balls, urns, counts, trials })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailRow {
    pub epsilon: f64,
    pub u: f64,
    pub threshold: f64,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailTable {
    pub rows: Vec<TailRow>,
    /// Least-squares slope of `log frequency` against `u` per ε, `None` when fewer
    /// than two frequencies are positive.
    pub slopes: Vec<(f64, Option<f64>)>,
}

impl TailTable {
    /// Every fitted slope is at most −1/2 (fast enough decay in `u`).
    pub fn decays(&self) -> bool {
        self.slopes.iter().all(|(_, s)| s.is_none_or(|s| s <= -0.5))
    }
}

/// Exceedance frequencies of `λ_max ≥ (C + ε) log N + u` over fresh trials.
pub fn tail_probability_check(
    dist: &PhaseDistribution,
    n: usize,
    trials: usize,
    epsilons: &[f64],
    u_grid: &[f64],
    seed: u64,
) -> Result<TailTable> {
    let samples = maxeig_samples(dist, n, trials, seed)?;
    tail_table(dist, n, &samples, epsilons, u_grid)
}

/// Same as [`tail_probability_check`] on existing samples.
pub fn tail_table(dist: &PhaseDistribution, n: usize, samples: &[MaxEigSample], epsilons: &[f64], u_grid: &[f64]) -> Result<TailTable> {
    let c = upper_bound_constant(dist)?;
    let ln = (n as f64).ln();
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for &eps in epsilons {
        let mut pts = Vec::new();
        for &u in u_grid {
            let threshold = (c + eps) * ln + u;
            let hits = samples.iter().filter(|s| s.lambda_max >= threshold).count();
            let frequency = hits as f64 / samples.len().max(1) as f64;
            if frequency > 0.0 {
                pts.push((u, frequency.ln()));
            }
            rows.push(TailRow { epsilon: eps, u, threshold, frequency });
        }
        let slope = (pts.len() >= 2).then(|| {
            let k = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            sxy / sxx
        });
        slopes.push((eps, slope));
    }
    Ok(TailTable { rows, slopes })
}
