//! Finite-`N` coefficient `K_{ρ,u,N}` from Dirichlet-kernel products.
//!
//! With `F(x) = sin(Nx/2)/sin(x/2)` the finite coefficient is
//! `N!/((N-r)!(2π)^r N^{n+1}) ∫ Π_j F(x_{ρ(j)} - x_{ρ(j+1)})`. For one block the
//! integrand is `N^n` and the value is 1. For two blocks with `e` transitions it
//! reduces to `(N-1)/(2π) ∫_{-π}^{π} (F(y)/N)^e dy`.

use std::f64::consts::PI;

use super::{CoefficientEstimate, EstimateMeta, Method};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::quad::gl20;

pub const MAX_N: usize = 64;

/// `F(y)/N` with the removable singularity filled in.
pub fn dirichlet_ratio(n: usize, y: f64) -> f64 {
    let s = (0.5 * y).sin();
    if s.abs() < 1e-12 {
        return 1.0;
    }
    (0.5 * n as f64 * y).sin() / (n as f64 * s)
}

fn integral(n: usize, e: u32, panels: usize) -> f64 {
    gl20().composite(|y| dirichlet_ratio(n, y).powi(e as i32), -PI, PI, panels)
}

pub fn k_finite_n(p: &Partition, n_dim: usize) -> Result<CoefficientEstimate> {
    let r = p.num_blocks();
    if r > 2 || n_dim > MAX_N || n_dim == 0 {
        return Err(Error::CapExceeded {
            what: "finite-N coefficient",
            detail: format!("needs r ≤ 2 and 1 ≤ N ≤ {MAX_N}, got r = {r}, N = {n_dim}"),
        });
    }
    let meta = EstimateMeta::Dimension(n_dim);
    if r == 1 {
        return Ok(CoefficientEstimate { rgs: p.rgs_string(), value: 1.0, exact: None, method: Method::FiniteN, stderr_or_bound: 0.0, meta });
    }
    if n_dim < 2 {
        return Ok(CoefficientEstimate { rgs: p.rgs_string(), value: 0.0, exact: None, method: Method::FiniteN, stderr_or_bound: 0.0, meta });
    }
    let w = p.rgs();
    let len = w.len();
    let e = (0..len).filter(|&i| w[i] != w[(i + 1) % len]).count() as u32;
    // The integrand is a trigonometric polynomial of degree e(N-1)/2.
    let panels = (e as usize * n_dim).max(16);
    let fine = integral(n_dim, e, panels);
    let coarse = integral(n_dim, e, panels / 2);
    let scale = (n_dim as f64 - 1.0) / (2.0 * PI);
    Ok(CoefficientEstimate {
        rgs: p.rgs_string(),
        value: scale * fine,
        exact: None,
        method: Method::FiniteN,
        stderr_or_bound: scale * (fine - coarse).abs(),
        meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_pair_closed_form() {
        let p = Partition::parse_rgs("0101").unwrap();
        let mut prev = f64::INFINITY;
        for n in [8usize, 16, 32, 64] {
            let nf = n as f64;
            let k = k_finite_n(&p, n).unwrap();
            let exact = (nf - 1.0) * (2.0 * nf.powi(3) + nf) / (3.0 * nf.powi(4));
            assert!((k.value - exact).abs() < 1e-12, "N={n}: {} vs {exact}", k.value);
            let gap = (k.value - 2.0 / 3.0).abs();
            assert!(gap < prev);
            prev = gap;
        }
    }

    #[test]
    fn small_cases() {
        let k = k_finite_n(&Partition::parse_rgs("01").unwrap(), 32).unwrap();
        assert!((k.value - 31.0 / 32.0).abs() < 1e-12);
        assert!((k.value - 1.0).abs() < 0.05);
        assert_eq!(k_finite_n(&Partition::single_block(1), 17).unwrap().value, 1.0);
        // Direct quadrature of the one-block integrand: ∫ F(0)^n dx = 2π N^n.
        let direct = gl20().composite(|_| 1.0, -PI, PI, 4) / (2.0 * PI);
        assert!((direct - 1.0).abs() < 1e-14);
        assert!(k_finite_n(&Partition::parse_rgs("012").unwrap(), 8).is_err());
        assert!(k_finite_n(&Partition::parse_rgs("01").unwrap(), 65).is_err());
    }
}
