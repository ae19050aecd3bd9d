//! `K_{ρ,u}` as an integral of products of `G(x) = sin(πx)/(πx)`.
//!
//! The reduced multigraph is integrated by variable elimination on a truncated
//! Gauss grid: one vertex is pinned at 0, each eliminated vertex of degree 0, 1
//! or 2 leaves a scalar, a vector or a matrix message. Graphs that would need a
//! degree-3 elimination are refused.

use std::collections::{BTreeSet, HashMap};

use super::{reduce, CoefficientEstimate, EstimateMeta, Method, Reduction};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::quad::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SincGrid {
    /// Each free variable ranges over `[-T, T]`.
    pub truncation: f64,
    pub panel_width: f64,
    pub order: usize,
}

impl Default for SincGrid {
    fn default() -> Self {
        Self { truncation: 32.0, panel_width: 0.5, order: 8 }
    }
}

impl SincGrid {
    fn nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let rule = GaussLegendre::new(self.order);
        let panels = (2.0 * self.truncation / self.panel_width).round().max(1.0) as usize;
        let h = 2.0 * self.truncation / panels as f64;
        let mut x = Vec::with_capacity(panels * self.order);
        let mut w = Vec::with_capacity(panels * self.order);
        for k in 0..panels {
            let a = -self.truncation + k as f64 * h;
            for (xi, wi) in rule.mapped(a, a + h) {
                x.push(xi);
                w.push(wi);
            }
        }
        (x, w)
    }
}

fn sinc_pow(x: f64, e: u32) -> f64 {
    let s = if x == 0.0 {
        1.0
    } else {
        let t = std::f64::consts::PI * x;
        t.sin() / t
    };
    s.powi(e as i32)
}

/// Integral of the reduced graph on a given grid.
pub fn graph_integral(red: &Reduction, grid: &SincGrid) -> Result<f64> {
    if red.is_trivial() {
        return Ok(1.0);
    }
    let r = red.blocks();
    let edges = red.edges();
    let (x, w) = grid.nodes();
    let np = x.len();

    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); r];
    for &(a, b) in edges.keys() {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let pinned = (0..r).max_by_key(|&v| (adj[v].len(), std::cmp::Reverse(v))).unwrap_or(0);

    let mut unary: Vec<Vec<f64>> = vec![vec![1.0; np]; r];
    // Pair potentials keyed (lo, hi), stored row-major with rows indexed by lo.
    let mut pair: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
    for (&(a, b), &e) in &edges {
        if a == pinned || b == pinned {
            let other = if a == pinned { b } else { a };
            for k in 0..np {
                unary[other][k] *= sinc_pow(x[k], e);
            }
        } else {
            let mut m = vec![0.0; np * np];
            for i in 0..np {
                for j in 0..np {
                    m[i * np + j] = sinc_pow(x[i] - x[j], e);
                }
            }
            pair.insert((a, b), m);
        }
    }
    let mut alive: BTreeSet<usize> = (0..r).filter(|&v| v != pinned).collect();
    for v in 0..r {
        adj[v].remove(&pinned);
    }
    let mut scalar = 1.0;
    // Oriented copy of the potential between `v` (rows) and `u` (columns).
    let oriented = |pair: &HashMap<(usize, usize), Vec<f64>>, v: usize, u: usize| -> Vec<f64> {
        let m = &pair[&(v.min(u), v.max(u))];
        if v < u {
            m.clone()
        } else {
            let mut t = vec![0.0; np * np];
            for i in 0..np {
                for j in 0..np {
                    t[j * np + i] = m[i * np + j];
                }
            }
            t
        }
    };
    while let Some(&v) = alive.iter().min_by_key(|&&v| (adj[v].len(), v)) {
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        let wu: Vec<f64> = (0..np).map(|k| w[k] * unary[v][k]).collect();
        match nbrs.len() {
            0 => scalar *= wu.iter().sum::<f64>(),
            1 => {
                let a = nbrs[0];
                let m = oriented(&pair, v, a);
                let mut msg = vec![0.0; np];
                for k in 0..np {
                    let row = &m[k * np..(k + 1) * np];
                    for i in 0..np {
                        msg[i] += wu[k] * row[i];
                    }
                }
                for i in 0..np {
                    unary[a][i] *= msg[i];
                }
            }
            2 => {
                let (a, b) = (nbrs[0], nbrs[1]);
                let ma = oriented(&pair, v, a);
                let mb = oriented(&pair, v, b);
                let mut c = vec![0.0; np * np];
                for k in 0..np {
                    let rb = &mb[k * np..(k + 1) * np];
                    for i in 0..np {
                        let s = ma[k * np + i] * wu[k];
                        if s == 0.0 {
                            continue;
                        }
                        let ci = &mut c[i * np..(i + 1) * np];
                        for j in 0..np {
                            ci[j] += s * rb[j];
                        }
                    }
                }
                let entry = pair.entry((a, b)).or_insert_with(|| vec![1.0; np * np]);
                for (e, cv) in entry.iter_mut().zip(&c) {
                    *e *= cv;
                }
                adj[a].insert(b);
                adj[b].insert(a);
            }
            d => {
                return Err(Error::CapExceeded {
                    what: "sinc quadrature",
                    detail: format!("elimination needs a degree-{d} step; use Monte Carlo"),
                })
            }
        }
        for &u in &nbrs {
            adj[u].remove(&v);
            pair.remove(&(v.min(u), v.max(u)));
        }
        adj[v].clear();
        alive.remove(&v);
    }
    Ok(scalar)
}

/// Sinc-product quadrature of `K_{ρ,u}`; the error estimate is the change when
/// the truncation is halved.
pub fn k_sinc_quadrature(p: &Partition, grid: &SincGrid) -> Result<CoefficientEstimate> {
    let red = reduce(p);
    let meta = EstimateMeta::Quadrature {
        truncation: grid.truncation,
        nodes_per_axis: grid.nodes().0.len(),
    };
    if red.is_trivial() {
        return Ok(CoefficientEstimate {
            rgs: p.rgs_string(),
            value: 1.0,
            exact: None,
            method: Method::SincQuadrature,
            stderr_or_bound: 0.0,
            meta,
        });
    }
    let (value, err) = sinc_with_error(&red, grid)?;
    Ok(CoefficientEstimate { rgs: p.rgs_string(), value, exact: None, method: Method::SincQuadrature, stderr_or_bound: err, meta })
}

pub(crate) fn sinc_with_error(red: &Reduction, grid: &SincGrid) -> Result<(f64, f64)> {
    let full = graph_integral(red, grid)?;
    let half = SincGrid { truncation: 0.5 * grid.truncation, ..*grid };
    let coarse = graph_integral(red, &half)?;
    Ok((full, (full - coarse).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let g = SincGrid::default();
        let k = k_sinc_quadrature(&Partition::parse_rgs("0101").unwrap(), &g).unwrap();
        assert!((k.value - 2.0 / 3.0).abs() < 1e-6, "{}", k.value);
        let k = k_sinc_quadrature(&Partition::alternating(6).unwrap(), &g).unwrap();
        assert!((k.value - 0.55).abs() < 1e-6, "{}", k.value);
        let k = k_sinc_quadrature(&Partition::single_block(5), &g).unwrap();
        assert_eq!(k.value, 1.0);
    }

    #[test]
    fn cycles_use_matrix_messages() {
        let g = SincGrid::default();
        for n in 4..=5 {
            let k = k_sinc_quadrature(&Partition::pairs(n).unwrap(), &g).unwrap();
            assert!((k.value - 2.0 / (n as f64 + 1.0)).abs() < 1e-5, "n={n}: {}", k.value);
        }
    }
}
