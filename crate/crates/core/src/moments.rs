//! Limiting moments `m_n = Σ_ρ K_{ρ,ν} c^{|ρ|-1}` and their bounds.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::coefficients::{conjecture_bound, k_for_distribution, CoefficientEngine, CoefficientEstimate, Method};
use crate::counting::{bell, catalan, harper_variance, narayana, stirling2};
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, Partition};
use crate::phase::PhaseDistribution;

pub const MOMENT_MAX_N: usize = 8;

/// Neumaier compensated sum in iteration order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue {
    pub value: f64,
    pub exact: Option<BigRational>,
    /// Worst-case error accumulated additively over partitions.
    pub err_bound: f64,
    pub methods: BTreeMap<Method, usize>,
}

fn check_d(d: u32, dist: &PhaseDistribution) -> Result<()> {
    match d {
        1 => Ok(()),
        2 if dist.is_uniform() => Ok(()),
        2 => Err(Error::InvalidParameter("d = 2 is only defined for uniform phases".into())),
        _ => Err(Error::InvalidParameter(format!("d must be 1 or 2, got {d}"))),
    }
}

fn cap(n: usize) -> Result<()> {
    if n == 0 || n > MOMENT_MAX_N {
        return Err(Error::CapExceeded { what: "moment enumeration", detail: format!("n = {n} is outside 1..={MOMENT_MAX_N}") });
    }
    Ok(())
}

/// Per-partition `K_{ρ,ν}` with `d = 2` squaring applied to crossing uniform coefficients.
fn term(p: &Partition, dist: &PhaseDistribution, d: u32, engine: &CoefficientEngine) -> Result<CoefficientEstimate> {
    let mut base = engine.uniform(p)?;
    if d == 2 && !p.is_noncrossing() {
        base.stderr_or_bound *= 2.0 * base.value.abs();
        base.value *= base.value;
        base.exact = base.exact.map(|v| &v * &v);
    }
    k_for_distribution(p, dist, &base)
}

pub fn limiting_moment(n: usize, c: f64, dist: &PhaseDistribution, d: u32, engine: &CoefficientEngine) -> Result<MomentValue> {
    cap(n)?;
    check_d(d, dist)?;
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    for r in 1..=n {
        if !dist.density_power_integral(r as u32).is_finite() {
            return Err(Error::CoefficientDoesNotExist { r });
        }
    }
    let parts: Vec<Partition> = enumerate_partitions(n)?.collect();
    let terms: Vec<(usize, CoefficientEstimate)> = parts
        .par_iter()
        .map(|p| term(p, dist, d, engine).map(|k| (p.num_blocks(), k)))
        .collect::<Result<_>>()?;
    let weight = |r: usize| c.powi(r as i32 - 1);
    let value = compensated_sum(terms.iter().map(|(r, k)| k.value * weight(*r)));
    let err_bound = compensated_sum(terms.iter().map(|(r, k)| k.stderr_or_bound * weight(*r)));
    let mut methods = BTreeMap::new();
    for (_, k) in &terms {
        *methods.entry(k.method).or_insert(0) += 1;
    }
    let exact = match BigRational::from_float(c) {
        Some(cr) if terms.iter().all(|(_, k)| k.exact.is_some()) => {
            let mut acc = BigRational::zero();
            for (r, k) in &terms {
                let mut w = BigRational::one();
                for _ in 1..*r {
                    w *= &cr;
                }
                acc += k.exact.as_ref().expect("checked") * w;
            }
            Some(acc)
        }
        _ => None,
    };
    let value = exact.as_ref().and_then(|v| v.to_f64()).unwrap_or(value);
    Ok(MomentValue { value, exact, err_bound, methods })
}

pub fn moment_upper_bound(n: usize) -> BigUint {
    bell(n)
}

/// `Σ_ρ max(bound, 1 if non-crossing)` at `c = 1`; crossing bounds are squared for `d = 2`.
pub fn moment_lower_bound_accurate(n: usize, d: u32) -> Result<BigRational> {
    cap(n)?;
    if d != 1 && d != 2 {
        return Err(Error::InvalidParameter(format!("d must be 1 or 2, got {d}")));
    }
    let mut acc = BigRational::zero();
    for p in enumerate_partitions(n)? {
        if p.is_noncrossing() {
            acc += BigRational::one();
        } else {
            let b = conjecture_bound(&p);
            acc += if d == 2 { &b * &b } else { b };
        }
    }
    Ok(acc)
}

/// `L(k, n) = (3(k-1)/(πn))^{(k-1)/2}`.
pub fn asymptotic_block_bound(k: usize, n: usize) -> f64 {
    let e = (k as f64 - 1.0) / 2.0;
    (3.0 * (k as f64 - 1.0) / (std::f64::consts::PI * n as f64)).powf(e)
}

/// `C_n + Σ_k (S(n,k) − T(n,k)) L(k,n)`.
pub fn moment_lower_bound_asymptotic(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut terms = vec![catalan(n).to_f64().unwrap_or(f64::INFINITY)];
    for k in 1..=n {
        let s = BigInt::from(stirling2(k, n)?) - BigInt::from(narayana(k, n)?);
        terms.push(s.to_f64().unwrap_or(f64::INFINITY) * asymptotic_block_bound(k, n));
    }
    Ok(compensated_sum(terms))
}

/// `(B_n/(σ_n√(2π)))·(3/(πe log n))^{n/(2e log n)}` and `B_n`.
pub fn harper_sandwich(n: usize) -> Result<(f64, BigUint)> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("harper_sandwich needs n ≥ 3, got {n}")));
    }
    let b = bell(n);
    let sigma = harper_variance(n).to_f64().unwrap_or(f64::NAN).sqrt();
    let nf = n as f64;
    let l = nf.ln();
    let e = std::f64::consts::E;
    let lower = b.to_f64().unwrap_or(f64::INFINITY) / (sigma * (2.0 * std::f64::consts::PI).sqrt())
        * (3.0 / (std::f64::consts::PI * e * l)).powf(nf / (2.0 * e * l));
    Ok((lower, b))
}

/// `Σ_ρ K_{ρ,ν} c^{|ρ|-1} Π_blocks D(block)`; the callback receives each block's
/// 1-based index tuple.
pub fn mixed_moment_formula<E, F>(
    n: usize,
    c: f64,
    dist: &PhaseDistribution,
    engine: &CoefficientEngine,
    mut block_moment: F,
) -> std::result::Result<f64, E>
where
    E: From<Error>,
    F: FnMut(&[usize]) -> std::result::Result<f64, E>,
{
    cap(n)?;
    let mut terms = Vec::new();
    for p in enumerate_partitions(n)? {
        let k = term(&p, dist, 1, engine)?;
        let mut prod = 1.0;
        for block in p.blocks() {
            prod *= block_moment(&block)?;
        }
        terms.push(k.value * c.powi(p.num_blocks() as i32 - 1) * prod);
    }
    Ok(compensated_sum(terms))
}

/// `m_n ≤ (2π‖p‖_∞ max(c,1))^n B_n` on the given prefix `m_1, m_2, ...`.
/// With an unbounded density the bound is vacuous and only finiteness is checked.
pub fn carleman_check(moments: &[f64], dist: &PhaseDistribution, c: f64) -> bool {
    let sup = dist.sup_norm();
    moments.iter().enumerate().all(|(i, &m)| {
        let n = i + 1;
        if !m.is_finite() {
            return false;
        }
        if !sup.is_finite() {
            return true;
        }
        let base = 2.0 * std::f64::consts::PI * sup * c.max(1.0);
        let bound = base.powi(n as i32) * bell(n).to_f64().unwrap_or(f64::INFINITY);
        m <= bound * (1.0 + 1e-12)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentBoundsRow {
    pub n: usize,
    pub catalan: BigUint,
    pub lower: BigRational,
    pub moment: MomentValue,
    pub bell: BigUint,
    pub d: u32,
}

pub fn moment_table(n_max: usize, c: f64, dist: &PhaseDistribution, d: u32, engine: &CoefficientEngine) -> Result<Vec<MomentBoundsRow>> {
    (1..=n_max)
        .map(|n| {
            Ok(MomentBoundsRow {
                n,
                catalan: catalan(n),
                lower: moment_lower_bound_accurate(n, d)?,
                moment: limiting_moment(n, c, dist, d, engine)?,
                bell: bell(n),
                d,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::MethodPolicy;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn exact_engine() -> CoefficientEngine {
        CoefficientEngine::new(MethodPolicy::ExactFirst, 0)
    }

    #[test]
    fn table_one_exact_rows() {
        let u = PhaseDistribution::uniform();
        let e = exact_engine();
        assert_eq!(limiting_moment(4, 1.0, &u, 1, &e).unwrap().exact, Some(rat(44, 3)));
        assert_eq!(limiting_moment(5, 1.0, &u, 1, &e).unwrap().exact, Some(rat(146, 3)));
        assert_eq!(limiting_moment(4, 1.0, &u, 2, &e).unwrap().exact, Some(rat(130, 9)));
        assert_eq!(limiting_moment(5, 1.0, &u, 2, &e).unwrap().exact, Some(rat(418, 9)));
        assert_eq!(limiting_moment(6, 1.0, &u, 1, &e).unwrap().exact, Some(rat(3571, 20)));
        assert_eq!(limiting_moment(7, 1.0, &u, 1, &e).unwrap().exact, Some(rat(2141, 3)));
        assert_eq!(limiting_moment(1, 0.3, &PhaseDistribution::log_singular(), 1, &e).unwrap().value, 1.0);
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(moment_lower_bound_accurate(4, 1).unwrap(), rat(44, 3));
        assert_eq!(moment_lower_bound_accurate(5, 1).unwrap(), rat(146, 3));
        let l6 = moment_lower_bound_accurate(6, 1).unwrap().to_f64().unwrap();
        assert!((l6 - 176.2944).abs() < 1e-3, "{l6}");
        let l7 = moment_lower_bound_accurate(7, 2).unwrap().to_f64().unwrap();
        assert!((l7 - 579.1567).abs() < 1e-3, "{l7}");
        assert!((asymptotic_block_bound(3, 10) - 6.0 / (10.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert_eq!(asymptotic_block_bound(1, 9), 1.0);
        assert!(moment_lower_bound_asymptotic(4).unwrap() <= 44.0 / 3.0);
        assert_eq!(moment_upper_bound(6), BigUint::from(203u32));
    }

    #[test]
    fn errors() {
        let e = exact_engine();
        let u = PhaseDistribution::uniform();
        assert_eq!(
            limiting_moment(3, 1.0, &PhaseDistribution::power_law(0.5).unwrap(), 1, &e).unwrap_err(),
            Error::CoefficientDoesNotExist { r: 2 }
        );
        assert!(limiting_moment(9, 1.0, &u, 1, &e).is_err());
        assert!(limiting_moment(4, 1.0, &PhaseDistribution::log_singular(), 2, &e).is_err());
        assert!(limiting_moment(4, 1.0, &u, 3, &e).is_err());
    }

    #[test]
    fn harper_and_carleman() {
        let (lo, hi) = harper_sandwich(7).unwrap();
        assert!(lo < 713.67 && hi == BigUint::from(877u32));
        let (lo, _) = harper_sandwich(4).unwrap();
        assert!(lo < 44.0 / 3.0);
        let u = PhaseDistribution::uniform();
        let m: Vec<f64> = (1..=7).map(|n| limiting_moment(n, 1.0, &u, 1, &exact_engine()).unwrap().value).collect();
        assert!(carleman_check(&m, &u, 1.0));
        assert!(!carleman_check(&[1.0, 2.0, 5.0, 16.0], &u, 1.0));
    }

    #[test]
    fn mixed_formula_reduces() {
        let e = exact_engine();
        let u = PhaseDistribution::uniform();
        let v: f64 = mixed_moment_formula::<Error, _>(4, 1.0, &u, &e, |_| Ok(1.0)).unwrap();
        assert!((v - 44.0 / 3.0).abs() < 1e-12);
        let v: f64 = mixed_moment_formula::<Error, _>(1, 1.0, &u, &e, |_| Ok(0.25)).unwrap();
        assert_eq!(v, 0.25);
    }
}
