//! Dense symmetric eigensolver: Householder tridiagonalization and implicit QL.

use crate::error::{Error, Result};

/// Square matrix in row-major storage, expected to be symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidParameter(format!("expected {} entries, got {}", n * n, data.len())));
        }
        Ok(Self { n, data })
    }

    /// Fill the upper triangle from `f(i, j)`, `i ≤ j`, and mirror it.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Largest absolute entry, used to scale residual checks.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    fn check(&self) -> Result<()> {
        let a = self.max_asymmetry();
        if a > 1e-12 {
            return Err(Error::NotSymmetric(a));
        }
        Ok(())
    }
}

/// Reduce to tridiagonal form `(d, e)` with `e[k] = T[k][k+1]` and `e[n-1] = 0`.
/// Works on the upper triangle only. When `q` is given it receives the
/// orthogonal factor with `A = Q T Qᵀ`.
fn tridiagonalize(a: &SymmetricMatrix, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<Vec<f64>>) {
    let n = a.n;
    let mut w = a.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut reflectors: Vec<(usize, Vec<f64>, f64)> = Vec::new();
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        d[k] = w[k * n + k];
        let m = n - k - 1;
        if m == 1 {
            e[k] = w[k * n + k + 1];
            continue;
        }
        let x = &w[k * n + k + 1..(k + 1) * n];
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        if norm2 == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let norm = norm2.sqrt();
        let x0 = x[0];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        let mut v = x.to_vec();
        v[0] = x0 - alpha;
        let tau = 1.0 / (norm2 - x0 * alpha);
        e[k] = alpha;
        // p = tau · A22 v using the upper triangle of the trailing block.
        let off = k + 1;
        let p = &mut p[..m];
        p.iter_mut().for_each(|z| *z = 0.0);
        for i in 0..m {
            let row = &w[(off + i) * n + off..(off + 1 + i) * n];
            let vi = v[i];
            let mut acc = row[i] * vi;
            let (tail_row, tail_v) = (&row[i + 1..], &v[i + 1..]);
            let tail_p = &mut p[i + 1..];
            for j in 0..tail_row.len() {
                acc += tail_row[j] * tail_v[j];
                tail_p[j] += tail_row[j] * vi;
            }
            p[i] += acc;
        }
        let mut pv = 0.0;
        for i in 0..m {
            p[i] *= tau;
            pv += p[i] * v[i];
        }
        let kk = 0.5 * tau * pv;
        for i in 0..m {
            p[i] -= kk * v[i];
        }
        // A22 -= v pᵀ + p vᵀ on the upper triangle.
        for i in 0..m {
            let (vi, pi) = (v[i], p[i]);
            let row = &mut w[(off + i) * n + off + i..(off + 1 + i) * n];
            let (vt, pt) = (&v[i..], &p[i..]);
            for j in 0..row.len() {
                row[j] -= vi * pt[j] + pi * vt[j];
            }
        }
        if want_q {
            reflectors.push((off, v, tau));
        }
    }
    if n > 0 {
        d[n - 1] = w[(n - 1) * n + n - 1];
    }
    let q = want_q.then(|| {
        let mut q = vec![0.0; n * n];
        for i in 0..n {
            q[i * n + i] = 1.0;
        }
        // Q = H_0 H_1 ... applied right to left onto the identity.
        for (off, v, tau) in reflectors.iter().rev() {
            let m = v.len();
            for col in 0..n {
                let mut s = 0.0;
                for i in 0..m {
                    s += v[i] * q[(off + i) * n + col];
                }
                s *= tau;
                if s != 0.0 {
                    for i in 0..m {
                        q[(off + i) * n + col] -= s * v[i];
                    }
                }
            }
        }
        q
    });
    (d, e, q)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. Rotations are
/// accumulated into the columns of `z` when given.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n && e[m].abs() > eps * tst1 {
            m += 1;
        }
        let m = m.min(n - 1);
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence);
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zk = &mut z[k * n..(k + 1) * n];
                            let h = zk[i + 1];
                            zk[i + 1] = s * zk[i] + c * h;
                            zk[i] = c * zk[i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// All eigenvalues in nondecreasing order.
pub fn eigenvalues_symmetric(a: &SymmetricMatrix) -> Result<Vec<f64>> {
    a.check()?;
    let (mut d, mut e, _) = tridiagonalize(a, false);
    tql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues (ascending) and eigenvectors (`vectors[k]` belongs to `values[k]`).
pub fn eigh(a: &SymmetricMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    a.check()?;
    let n = a.n;
    let (mut d, mut e, q) = tridiagonalize(a, true);
    let mut z = q.expect("requested");
    tql(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = order.iter().map(|&c| (0..n).map(|r| z[r * n + c]).collect()).collect();
    Ok((values, vectors))
}

/// `[[Re, -Im], [Im, Re]]` for a Hermitian matrix given by its parts.
pub fn hermitian_embedding(n: usize, re: &[f64], im: &[f64]) -> SymmetricMatrix {
    let m = 2 * n;
    let mut out = SymmetricMatrix::zeros(m);
    for i in 0..n {
        for j in 0..n {
            let (r, s) = (re[i * n + j], im[i * n + j]);
            out.set(i, j, r);
            out.set(i + n, j + n, r);
            out.set(i, j + n, -s);
            out.set(i + n, j, s);
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix through its real embedding, whose spectrum
/// repeats every eigenvalue twice; each sorted pair is averaged.
pub fn hermitian_eigenvalues(n: usize, re: &[f64], im: &[f64]) -> Result<Vec<f64>> {
    let doubled = eigenvalues_symmetric(&hermitian_embedding(n, re, im))?;
    Ok(doubled.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;

    fn random_symmetric(n: usize, seed: u64) -> SymmetricMatrix {
        let mut rng = stream(seed, "linalg-test", n as u64);
        SymmetricMatrix::from_upper(n, |_, _| rng.random::<f64>() - 0.5)
    }

    #[test]
    fn closed_forms() {
        assert_eq!(eigenvalues_symmetric(&SymmetricMatrix::identity(5)).unwrap(), vec![1.0; 5]);
        let a = 0.3;
        let m = SymmetricMatrix::from_row_major(2, vec![1.0, a, a, 1.0]).unwrap();
        let ev = eigenvalues_symmetric(&m).unwrap();
        assert!((ev[0] - 0.7).abs() < 1e-15 && (ev[1] - 1.3).abs() < 1e-15);
        assert!(eigenvalues_symmetric(&SymmetricMatrix::zeros(0)).unwrap().is_empty());
        assert_eq!(eigenvalues_symmetric(&SymmetricMatrix::identity(1)).unwrap(), vec![1.0]);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = SymmetricMatrix::from_row_major(2, vec![1.0, 0.5, 0.4, 1.0]).unwrap();
        assert!(matches!(eigenvalues_symmetric(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn residuals_and_trace() {
        for n in [3, 7, 40, 101] {
            let a = random_symmetric(n, 2);
            let (vals, vecs) = eigh(&a).unwrap();
            let only = eigenvalues_symmetric(&a).unwrap();
            let trace: f64 = (0..n).map(|i| a.get(i, i)).sum();
            assert!((vals.iter().sum::<f64>() - trace).abs() < 1e-10);
            let scale = a.max_abs() * n as f64;
            for (k, (lam, v)) in vals.iter().zip(&vecs).enumerate() {
                assert!((lam - only[k]).abs() < 1e-11);
                let av = a.mul_vec(v);
                let res: f64 = av.iter().zip(v).map(|(x, y)| (x - lam * y).powi(2)).sum::<f64>().sqrt();
                assert!(res <= 1e-9 * scale, "n={n} k={k} res={res}");
            }
        }
    }

    #[test]
    fn hermitian_pairs() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let ev = hermitian_eigenvalues(2, &[2.0, 0.0, 0.0, 2.0], &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }
}
