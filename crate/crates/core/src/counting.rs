//! Bell, Stirling, Narayana and Catalan numbers, and Harper's normal approximation.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Row `n` of the Stirling triangle: `S(n, k)` for `k = 0..=n`.
pub fn stirling2_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m + 1];
        for k in 1..=m {
            let mut v = if k - 1 < row.len() { row[k - 1].clone() } else { BigUint::zero() };
            if k < row.len() {
                v += &row[k] * BigUint::from(k);
            }
            next[k] = v;
        }
        row = next;
    }
    row
}

/// Number of partitions of `{1..n}` into `k` blocks.
pub fn stirling2(k: usize, n: usize) -> Result<BigUint> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("stirling2 needs 1 ≤ k ≤ n, got k={k}, n={n}")));
    }
    Ok(stirling2_row(n).swap_remove(k))
}

pub fn bell(n: usize) -> BigUint {
    stirling2_row(n).into_iter().sum()
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// Non-crossing partitions of `{1..n}` with `k` blocks: `C(n,k)C(n,k-1)/n`.
pub fn narayana(k: usize, n: usize) -> Result<BigUint> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("narayana needs 1 ≤ k ≤ n, got k={k}, n={n}")));
    }
    Ok(binomial(n, k) * binomial(n, k - 1) / BigUint::from(n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarperStats {
    pub sigma: f64,
    /// `n / (e log n)`.
    pub j_estimate: f64,
    pub modal_k: usize,
}

/// Exact `σ_n² = B_{n+2}/B_n − (B_{n+1}/B_n)² − 1`.
pub fn harper_variance(n: usize) -> BigRational {
    let b0 = BigInt::from(bell(n));
    let b1 = BigInt::from(bell(n + 1));
    let b2 = BigInt::from(bell(n + 2));
    let r1 = BigRational::new(b1, b0.clone());
    BigRational::new(b2, b0) - &r1 * &r1 - BigRational::one()
}

pub fn harper_stats(n: usize) -> Result<HarperStats> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("harper_stats needs n ≥ 3, got {n}")));
    }
    let var = harper_variance(n).to_f64().unwrap_or(f64::NAN);
    let row = stirling2_row(n);
    let modal_k = (1..=n).max_by(|&a, &b| row[a].cmp(&row[b]).then(b.cmp(&a))).unwrap_or(1);
    let nf = n as f64;
    Ok(HarperStats { sigma: var.sqrt(), j_estimate: nf / (std::f64::consts::E * nf.ln()), modal_k })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_root_tends_to_one() {
        let r: Vec<f64> = (3..=60).map(|n| harper_stats(n).unwrap().sigma.powf(1.0 / n as f64)).collect();
        // Rises through 1 at n = 9, peaks at n = 23, then decreases towards 1.
        assert!(r[..6].iter().all(|&v| v < 1.0) && r[6] > 1.0);
        let peak = (0..r.len()).max_by(|&a, &b| r[a].total_cmp(&r[b])).unwrap() + 3;
        assert_eq!(peak, 23);
        assert!(r[21..].windows(2).all(|w| w[1] < w[0] && w[1] > 1.0));
        assert!((r[57] - 1.01166).abs() < 1e-5);
    }

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn table_values() {
        let bells: Vec<BigUint> = (1..=7).map(bell).collect();
        assert_eq!(bells, [1u64, 2, 5, 15, 52, 203, 877].map(u).to_vec());
        let cats: Vec<BigUint> = (4..=7).map(catalan).collect();
        assert_eq!(cats, [14u64, 42, 132, 429].map(u).to_vec());
        assert_eq!(bell(12), u(4_213_597));
        assert_eq!(stirling2(2, 4).unwrap(), u(7));
        assert_eq!(narayana(1, 9).unwrap(), u(1));
        assert!(stirling2(5, 4).is_err());
        assert!(narayana(0, 4).is_err());
    }

    #[test]
    fn sums() {
        for n in 1..=15 {
            let s: BigUint = (1..=n).map(|k| stirling2(k, n).unwrap()).sum();
            assert_eq!(s, bell(n));
            let t: BigUint = (1..=n).map(|k| narayana(k, n).unwrap()).sum();
            assert_eq!(t, catalan(n));
        }
    }

    #[test]
    fn harper() {
        for n in 3..=60 {
            assert!(harper_stats(n).unwrap().sigma > 0.0);
        }
        let row = stirling2_row(20);
        let h = harper_stats(20).unwrap();
        assert!((1..=20).all(|k| row[k] <= row[h.modal_k]));
        assert!(harper_stats(2).is_err());
    }
}
