//! Irwin–Hall densities `g^{(m)}` as exact piecewise polynomials.
//!
//! `g^{(m)}` is the density of a sum of `m` independent uniforms on
//! `[-1/2, 1/2]`. Pieces live on unit intervals starting at `-m/2`, so all
//! breakpoints are half-integers and products of several densities can be
//! integrated exactly on the half-integer grid.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense polynomial, coefficients low to high.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn one() -> Self {
        Poly(vec![BigRational::one()])
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `∫_a^b p(x) dx`.
    pub fn integrate(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let mut anti = vec![BigRational::zero()];
        for (i, c) in self.0.iter().enumerate() {
            anti.push(c / BigRational::from_integer(BigInt::from(i + 1)));
        }
        let anti = Poly(anti);
        anti.eval(b) - anti.eval(a)
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn binom(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrwinHall {
    pub m: usize,
    /// Piece `j` is valid on `[-m/2 + j, -m/2 + j + 1]`.
    pub pieces: Vec<Poly>,
}

impl IrwinHall {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("Irwin-Hall order must be at least 1".into()));
        }
        let half = rat(m as i64, 2);
        let scale = BigRational::from_integer(factorial(m - 1)).recip();
        let mut pieces = Vec::with_capacity(m);
        let mut acc = vec![BigRational::zero(); m];
        for j in 0..m {
            // Add the term k = j: (-1)^j C(m,j) (t + m/2 - j)^{m-1}.
            let c = &half - BigRational::from_integer(BigInt::from(j));
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let w = BigRational::from_integer(sign * binom(m, j));
            let mut cpow = vec![BigRational::one(); m];
            for i in 1..m {
                cpow[i] = &cpow[i - 1] * &c;
            }
            for (i, slot) in acc.iter_mut().enumerate() {
                let term = BigRational::from_integer(binom(m - 1, i)) * &cpow[m - 1 - i];
                *slot += &w * term;
            }
            pieces.push(Poly(acc.iter().map(|a| a * &scale).collect()));
        }
        Ok(Self { m, pieces })
    }

    /// Shared cached instance.
    pub fn cached(m: usize) -> Result<Arc<IrwinHall>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<IrwinHall>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = cache.lock().expect("cache poisoned").get(&m) {
            return Ok(g.clone());
        }
        let g = Arc::new(IrwinHall::new(m)?);
        cache.lock().expect("cache poisoned").insert(m, g.clone());
        Ok(g)
    }

    fn left(&self) -> BigRational {
        -rat(self.m as i64, 2)
    }

    /// Piece covering `[lo, lo + 1/2]`, or `None` outside the support.
    fn piece_on(&self, lo: &BigRational) -> Option<&Poly> {
        let off = lo - self.left();
        if off.is_negative() {
            return None;
        }
        let j = off.floor().to_integer().to_usize()?;
        self.pieces.get(j)
    }
}

/// `g^{(m)}(t)` from the truncated-power sum with `(x)_+^k = 0` for `x ≤ 0`.
///
/// The sum runs to `k = m`; the last term vanishes on the support and cancels
/// the polynomial past `m/2`.
pub fn irwin_hall_at(m: usize, t: &BigRational) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::InvalidParameter("Irwin-Hall order must be at least 1".into()));
    }
    let half = rat(m as i64, 2);
    let mut acc = BigRational::zero();
    for k in 0..=m {
        let x = t + &half - BigRational::from_integer(BigInt::from(k));
        if !x.is_positive() {
            continue;
        }
        let mut p = BigRational::one();
        for _ in 0..m - 1 {
            p *= &x;
        }
        let term = BigRational::from_integer(binom(m, k)) * p;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc / BigRational::from_integer(factorial(m - 1)))
}

pub fn irwin_hall_at_f64(m: usize, t: f64) -> Result<f64> {
    let t = BigRational::from_float(t).ok_or_else(|| Error::InvalidParameter("non-finite argument".into()))?;
    Ok(irwin_hall_at(m, &t)?.to_f64().unwrap_or(f64::NAN))
}

/// `g^{(m)}(0)`, with `g^{(0)}(0) = 1` for the empty convolution.
pub fn value_at_zero(m: usize) -> BigRational {
    static CACHE: OnceLock<Mutex<HashMap<usize, BigRational>>> = OnceLock::new();
    if m == 0 {
        return BigRational::one();
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache poisoned").get(&m) {
        return v.clone();
    }
    let v = irwin_hall_at(m, &BigRational::zero()).expect("m ≥ 1");
    cache.lock().expect("cache poisoned").insert(m, v.clone());
    v
}

/// `∫ Π g^{(m_i)}(t) dt` exactly. A zero order stands for a point mass at 0:
/// the integral collapses to the product of the other densities at 0 (and to 1
/// when every order is zero).
pub fn integrate_product(orders: &[usize]) -> Result<BigRational> {
    if orders.is_empty() {
        return Err(Error::InvalidParameter("empty product".into()));
    }
    if orders.contains(&0) {
        return Ok(orders.iter().filter(|&&m| m > 0).map(|&m| value_at_zero(m)).product());
    }
    let mut key = orders.to_vec();
    key.sort_unstable();
    static CACHE: OnceLock<Mutex<HashMap<Vec<usize>, BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let gs: Vec<Arc<IrwinHall>> = key.iter().map(|&m| IrwinHall::cached(m)).collect::<Result<_>>()?;
    let m_min = key[0] as i64;
    let half = rat(1, 2);
    let mut total = BigRational::zero();
    // Half-integer grid on the narrowest support.
    for s in 0..(2 * m_min) {
        let lo = rat(-m_min + s, 2);
        let hi = &lo + &half;
        let mut prod = Poly::one();
        let mut inside = true;
        for g in &gs {
            match g.piece_on(&lo) {
                Some(p) => prod = prod.mul(p),
                None => {
                    inside = false;
                    break;
                }
            }
        }
        if inside {
            total += prod.integrate(&lo, &hi);
        }
    }
    cache.lock().expect("cache poisoned").insert(key, total.clone());
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FkgOutcome {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

/// `∫ g^{(m-p)} g^{(p)} g^{(n-p)} ≥ g^{(m)}(0) g^{(n)}(0)` for `1 ≤ p ≤ m ≤ n`.
pub fn fkg_check(m: usize, n: usize, p: usize) -> Result<FkgOutcome> {
    if !(1 <= p && p <= m && m <= n) {
        return Err(Error::InvalidParameter(format!("fkg_check needs 1 ≤ p ≤ m ≤ n, got ({m},{n},{p})")));
    }
    let lhs = integrate_product(&[m - p, p, n - p])?;
    let rhs = value_at_zero(m) * value_at_zero(n);
    let holds = lhs >= rhs;
    Ok(FkgOutcome { lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(value_at_zero(1), rat(1, 1));
        assert_eq!(value_at_zero(2), rat(1, 1));
        assert_eq!(value_at_zero(3), rat(3, 4));
        assert_eq!(value_at_zero(4), rat(2, 3));
        assert_eq!(value_at_zero(6), rat(11, 20));
        for m in 2..20 {
            assert!(value_at_zero(m + 1) < value_at_zero(m), "m={m}");
        }
    }

    #[test]
    fn pieces_agree_with_formula() {
        for m in 1..=9 {
            let g = IrwinHall::new(m).unwrap();
            let mut mass = BigRational::zero();
            for (j, p) in g.pieces.iter().enumerate() {
                let lo = rat(2 * j as i64 - m as i64, 2);
                let hi = &lo + BigRational::one();
                mass += p.integrate(&lo, &hi);
                let mid = &lo + rat(1, 3);
                assert_eq!(p.eval(&mid), irwin_hall_at(m, &mid).unwrap());
                // Even function.
                assert_eq!(irwin_hall_at(m, &mid).unwrap(), irwin_hall_at(m, &-mid.clone()).unwrap());
            }
            assert_eq!(mass, BigRational::one(), "m={m}");
            assert!(irwin_hall_at(m, &rat(m as i64 + 1, 2)).unwrap().is_zero());
        }
    }

    #[test]
    fn products() {
        assert_eq!(integrate_product(&[2, 2, 2]).unwrap(), rat(1, 2));
        assert_eq!(integrate_product(&[1, 3, 3]).unwrap(), rat(9, 20));
        // ∫ g^{(a)} g^{(b)} = g^{(a+b)}(0)
        assert_eq!(integrate_product(&[3, 5]).unwrap(), value_at_zero(8));
        assert_eq!(integrate_product(&[0, 3, 4]).unwrap(), rat(3, 4) * rat(2, 3));
        assert_eq!(integrate_product(&[0, 0]).unwrap(), BigRational::one());
    }

    #[test]
    fn fkg_small_cases() {
        let o = fkg_check(2, 2, 1).unwrap();
        assert_eq!(o.lhs, BigRational::one());
        assert_eq!(o.rhs, BigRational::one());
        assert!(o.holds);
        assert!(fkg_check(6, 10, 3).unwrap().holds);
        assert!(fkg_check(3, 2, 1).is_err());
    }
}
