use num_bigint::BigInt;
use num_rational::BigRational;

use super::reduce;
use crate::error::{Error, Result};
use crate::irwin_hall::{integrate_product, value_at_zero};
use crate::partition::Partition;

/// `K` of `{1,3,5,...},{2,4,6,...}` on `n` points: `g^{(n)}(0)`.
pub fn k_closed_form_alternating(n: usize) -> Result<BigRational> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("alternating closed form needs even n ≥ 2, got {n}")));
    }
    if n == 2 {
        return Ok(BigRational::from_integer(BigInt::from(1)));
    }
    Ok(value_at_zero(n))
}

/// `K` of `{i, n+i}` on `2n` points: `2/(n+1)`.
pub fn k_closed_form_pairs(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidParameter("pairs closed form needs n ≥ 1".into()));
    }
    Ok(BigRational::new(BigInt::from(2), BigInt::from(n + 1)))
}

/// Exact `K_{ρ,u}` when the reduced partition has at most three blocks,
/// `None` otherwise.
pub fn k_exact_small_blocks(p: &Partition) -> Option<BigRational> {
    let red = reduce(p);
    if red.is_trivial() {
        return Some(BigRational::from_integer(BigInt::from(1)));
    }
    let edges = red.edges();
    match red.blocks() {
        2 => Some(value_at_zero(edges[&(0, 1)] as usize)),
        3 => {
            let e = |a, b| edges.get(&(a, b)).copied().unwrap_or(0) as usize;
            integrate_product(&[e(0, 1), e(0, 2), e(1, 2)]).ok()
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn closed_forms() {
        assert_eq!(k_closed_form_alternating(4).unwrap(), rat(2, 3));
        assert_eq!(k_closed_form_alternating(6).unwrap(), rat(11, 20));
        assert_eq!(k_closed_form_alternating(2).unwrap(), rat(1, 1));
        assert!(k_closed_form_alternating(5).is_err());
        assert_eq!(k_closed_form_pairs(2).unwrap(), k_closed_form_alternating(4).unwrap());
        assert_eq!(k_closed_form_pairs(3).unwrap(), rat(1, 2));
        assert_eq!(k_closed_form_pairs(1).unwrap(), rat(1, 1));
    }

    #[test]
    fn exact_matches_closed_forms() {
        for n in [4, 6, 8, 10] {
            let p = Partition::alternating(n).unwrap();
            assert_eq!(k_exact_small_blocks(&p).unwrap(), k_closed_form_alternating(n).unwrap());
        }
        for n in 1..=3 {
            let p = Partition::pairs(n).unwrap();
            assert_eq!(k_exact_small_blocks(&p).unwrap(), k_closed_form_pairs(n).unwrap());
        }
        assert!(k_exact_small_blocks(&Partition::pairs(4).unwrap()).is_none());
    }

    #[test]
    fn worked_three_block_example() {
        let p = Partition::from_blocks(10, &[vec![1, 5, 7], vec![3, 9, 10], vec![2, 4, 6, 8]]).unwrap();
        assert_eq!(k_exact_small_blocks(&p).unwrap(), integrate_product(&[1, 5, 3]).unwrap());
    }

    #[test]
    fn noncrossing_is_one_and_small_n_is_exact() {
        for n in 1..=7 {
            for p in enumerate_partitions(n).unwrap() {
                let k = k_exact_small_blocks(&p).expect("n ≤ 7 reduces to at most three blocks");
                assert_eq!(k == rat(1, 1), p.is_noncrossing(), "{}", p.rgs_string());
                assert!(k <= rat(1, 1) && k > rat(0, 1));
            }
        }
    }
}
