//! Capacity of the Vandermonde channel and reference curves.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase::PhaseDistribution;
use crate::rng::stream;
use crate::spectra::{log_det_capacity_sample, sample_spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityCurve {
    pub gammas: Vec<f64>,
    pub vandermonde: Vec<f64>,
    pub stderr: Vec<f64>,
    pub jensen: Vec<f64>,
    /// Gaussian closed form at `β = c`.
    pub gaussian: Vec<f64>,
    pub c: f64,
    pub units: Units,
}

impl CapacityCurve {
    pub fn in_units(&self, units: Units) -> CapacityCurve {
        let f = |v: &Vec<f64>| v.iter().map(|&x| units.convert(self.to_nats(x))).collect();
        CapacityCurve {
            gammas: self.gammas.clone(),
            vandermonde: f(&self.vandermonde),
            stderr: f(&self.stderr),
            jensen: f(&self.jensen),
            gaussian: f(&self.gaussian),
            c: self.c,
            units,
        }
    }

    fn to_nats(&self, v: f64) -> f64 {
        match self.units {
            Units::Nats => v,
            Units::Bits => v * std::f64::consts::LN_2,
        }
    }
}

/// `c log(1 + γ)`.
pub fn jensen_bound(gamma: f64, c: f64) -> f64 {
    c * gamma.ln_1p()
}

/// `F(a, b) = (√(a(1+√b)² + 1) − √(a(1−√b)² + 1))²`.
pub fn gaussian_f(a: f64, b: f64) -> f64 {
    let s = b.sqrt();
    ((a * (1.0 + s).powi(2) + 1.0).sqrt() - (a * (1.0 - s).powi(2) + 1.0).sqrt()).powi(2)
}

/// Asymptotic `(1/N) log det(I + γ H H*)` for `N×L` Gaussian `H` with
/// `CN(0, 1/N)` entries, `β = L/N`, in nats.
pub fn capacity_gaussian(gamma: f64, beta: f64) -> Result<f64> {
    if !(gamma >= 0.0) || !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("need γ ≥ 0 and β > 0, got γ = {gamma}, β = {beta}")));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let f = gaussian_f(gamma, beta);
    Ok(-f / (4.0 * gamma) + beta * (1.0 + gamma - f / 4.0).ln() + (1.0 + beta * gamma - f / 4.0).ln())
}

/// Monte Carlo capacity with the same spectrum reused across the whole γ grid.
pub fn capacity_vandermonde(
    dist: &PhaseDistribution,
    n: usize,
    l: usize,
    gammas: &[f64],
    trials: usize,
    seed: u64,
) -> Result<CapacityCurve> {
    if gammas.iter().any(|g| !(*g >= 0.0)) {
        return Err(Error::InvalidParameter("SNR values must be nonnegative".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let per_trial: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = sample_spectrum(dist, n, l, seed, t)?;
            Ok(gammas.iter().map(|&g| log_det_capacity_sample(&s.eigenvalues, n, g)).collect())
        })
        .collect::<Result<_>>()?;
    let tn = trials as f64;
    let mut mean = vec![0.0; gammas.len()];
    let mut stderr = vec![0.0; gammas.len()];
    for (k, m) in mean.iter_mut().enumerate() {
        *m = per_trial.iter().map(|v| v[k]).sum::<f64>() / tn;
        if trials > 1 {
            let var = per_trial.iter().map(|v| (v[k] - *m).powi(2)).sum::<f64>() / (tn - 1.0);
            stderr[k] = (var / tn).sqrt();
        }
    }
    let c = l as f64 / n as f64;
    Ok(CapacityCurve {
        gammas: gammas.to_vec(),
        vandermonde: mean,
        stderr,
        jensen: gammas.iter().map(|&g| jensen_bound(g, c)).collect(),
        gaussian: gammas.iter().map(|&g| capacity_gaussian(g, c)).collect::<Result<_>>()?,
        c,
        units: Units::Nats,
    })
}

/// `(1/N) log det(I + γ H*H)` for one `N×L` matrix with `CN(0, 1/N)` entries,
/// one value per γ, via the Gram matrix and a complex Cholesky factorisation.
pub fn gaussian_logdet_simulation(n: usize, l: usize, gammas: &[f64], seed: u64) -> Result<Vec<f64>> {
    if n == 0 || l == 0 {
        return Err(Error::InvalidParameter("matrix dimensions must be positive".into()));
    }
    let mut rng = stream(seed, "capacity.gaussian", 0);
    let sd = (0.5 / n as f64).sqrt();
    // Column-major: column k occupies [k*n, (k+1)*n).
    let mut hr = vec![0.0; n * l];
    let mut hi = vec![0.0; n * l];
    for v in hr.iter_mut().chain(hi.iter_mut()) {
        *v = rng.sample::<f64, _>(StandardNormal) * sd;
    }
    let mut gr = vec![0.0; l * l];
    let mut gi = vec![0.0; l * l];
    let rows: Vec<(usize, Vec<f64>, Vec<f64>)> = (0..l)
        .into_par_iter()
        .map(|a| {
            let (ar, ai) = (&hr[a * n..(a + 1) * n], &hi[a * n..(a + 1) * n]);
            let mut re = vec![0.0; l - a];
            let mut im = vec![0.0; l - a];
            for b in a..l {
                let (br, bi) = (&hr[b * n..(b + 1) * n], &hi[b * n..(b + 1) * n]);
                let mut sr = 0.0;
                let mut si = 0.0;
                for p in 0..n {
                    sr += ar[p] * br[p] + ai[p] * bi[p];
                    si += ar[p] * bi[p] - ai[p] * br[p];
                }
                re[b - a] = sr;
                im[b - a] = si;
            }
            (a, re, im)
        })
        .collect();
    for (a, re, im) in rows {
        for (off, (r, i)) in re.into_iter().zip(im).enumerate() {
            let b = a + off;
            gr[a * l + b] = r;
            gi[a * l + b] = i;
            gr[b * l + a] = r;
            gi[b * l + a] = -i;
        }
    }
    gammas
        .iter()
        .map(|&g| {
            let mut ar: Vec<f64> = gr.iter().map(|v| g * v).collect();
            let mut ai: Vec<f64> = gi.iter().map(|v| g * v).collect();
            for k in 0..l {
                ar[k * l + k] += 1.0;
            }
            Ok(complex_cholesky_logdet(l, &mut ar, &mut ai)? / n as f64)
        })
        .collect()
}

/// `log det A` for Hermitian positive definite `A`, destroying the input.
fn complex_cholesky_logdet(n: usize, ar: &mut [f64], ai: &mut [f64]) -> Result<f64> {
    // Lower factor stored in the lower triangle, row-major.
    let mut logdet = 0.0;
    for j in 0..n {
        let mut d = ar[j * n + j];
        for k in 0..j {
            d -= ar[j * n + k].powi(2) + ai[j * n + k].powi(2);
        }
        if !(d > 0.0) {
            return Err(Error::InvalidParameter("matrix is not positive definite".into()));
        }
        let ljj = d.sqrt();
        logdet += 2.0 * ljj.ln();
        ar[j * n + j] = ljj;
        ai[j * n + j] = 0.0;
        let (head, tail) = ar.split_at_mut((j + 1) * n);
        let (head_i, tail_i) = ai.split_at_mut((j + 1) * n);
        let (rj, ij) = (&head[j * n..j * n + j], &head_i[j * n..j * n + j]);
        let rows_r = tail.par_chunks_mut(n);
        let rows_i = tail_i.par_chunks_mut(n);
        rows_r.zip(rows_i).for_each(|(row_r, row_i)| {
            // L_ij = (A_ij − Σ_k L_ik conj(L_jk)) / L_jj
            let mut sr = row_r[j];
            let mut si = row_i[j];
            for k in 0..j {
                let (xr, xi) = (row_r[k], row_i[k]);
                let (yr, yi) = (rj[k], -ij[k]);
                sr -= xr * yr - xi * yi;
                si -= xr * yi + xi * yr;
            }
            row_r[j] = sr / ljj;
            row_i[j] = si / ljj;
        });
    }
    Ok(logdet)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(capacity_gaussian(0.0, 0.7).unwrap(), 0.0);
        assert_eq!(gaussian_f(0.0, 2.0), 0.0);
        for g in [0.5, 1.0, 7.0] {
            assert!((gaussian_f(g, 1.0) - ((4.0 * g + 1.0f64).sqrt() - 1.0).powi(2)).abs() < 1e-12);
        }
        assert!((capacity_gaussian(1.0, 1.0).unwrap() - 0.580_46).abs() < 1e-4);
        assert_eq!(jensen_bound(0.0, 1.0), 0.0);
        assert!((jensen_bound(std::f64::consts::E - 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((Units::Bits.convert(std::f64::consts::LN_2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cholesky_matches_eigenvalues() {
        // [[2, i], [-i, 2]]: det = 3.
        let mut ar = vec![2.0, 0.0, 0.0, 2.0];
        let mut ai = vec![0.0, 1.0, -1.0, 0.0];
        assert!((complex_cholesky_logdet(2, &mut ar, &mut ai).unwrap() - 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn small_gaussian_simulation() {
        let v = gaussian_logdet_simulation(200, 200, &[1.0], 4).unwrap();
        assert!((v[0] / capacity_gaussian(1.0, 1.0).unwrap() - 1.0).abs() < 0.05);
        // β is columns over rows: N = 400, L = 100.
        let v = gaussian_logdet_simulation(400, 100, &[5.0], 4).unwrap();
        assert!((v[0] / capacity_gaussian(5.0, 0.25).unwrap() - 1.0).abs() < 0.02, "{v:?}");
        assert!((v[0] / capacity_gaussian(5.0, 4.0).unwrap() - 1.0).abs() > 0.5);
    }

    #[test]
    fn paired_curve_is_monotone() {
        let u = PhaseDistribution::uniform();
        let gammas: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let curve = capacity_vandermonde(&u, 30, 30, &gammas, 20, 1).unwrap();
        assert_eq!(curve.vandermonde[0], 0.0);
        assert!(curve.vandermonde.windows(2).all(|w| w[1] >= w[0]));
        assert!(curve.vandermonde.iter().zip(&curve.jensen).all(|(v, j)| v <= j));
    }
}
