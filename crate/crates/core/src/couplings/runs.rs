//! Runs of consecutive ones in Bernoulli sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_unit, invalid, Error, Result};

/// Longest sequence length [`run_probability_exact`] will enumerate.
pub const ENUMERATION_LIMIT: u32 = 24;

fn check_lengths(k: u32, m: u32) -> Result<()> {
    if k == 0 || k > m {
        return Err(invalid("k", "need 1 <= k <= m"));
    }
    Ok(())
}

/// Lower bound `1 - (1 - mu^k)^floor(m/k)` on the chance of `k` consecutive
/// ones among `m` trials.
pub fn consecutive_ones_bound(mu: f64, k: u32, m: u32) -> Result<f64> {
    check_unit("mu", mu)?;
    check_lengths(k, m)?;
    Ok(1.0 - (1.0 - mu.powi(k as i32)).powi((m / k) as i32))
}

pub fn consecutive_ones_bound_rational(mu: &BigRational, k: u32, m: u32) -> Result<BigRational> {
    check_rational_unit(mu)?;
    check_lengths(k, m)?;
    let one = BigRational::one();
    let miss = &one - pow(mu, k);
    Ok(&one - pow(&miss, m / k))
}

/// `P(some run of >= k ones)` for `m` i.i.d. Bernoulli(`mu`) trials, by
/// enumerating all `2^m` sequences.
pub fn run_probability_exact(m: u32, k: u32, mu: f64) -> Result<f64> {
    check_unit("mu", mu)?;
    let mu = BigRational::from_float(mu).expect("finite");
    let p = run_probability_exact_rational(m, k, &mu)?;
    Ok(to_f64(&p))
}

pub fn run_probability_exact_rational(m: u32, k: u32, mu: &BigRational) -> Result<BigRational> {
    check_rational_unit(mu)?;
    check_lengths(k, m)?;
    Ok(RunTable::enumerate(m)?.probability(k, mu))
}

/// Sequence counts by longest run and number of ones.
#[derive(Clone, Debug)]
pub struct RunTable {
    m: u32,
    /// `counts[longest][ones]`.
    counts: Vec<Vec<u64>>,
}

impl RunTable {
    pub fn enumerate(m: u32) -> Result<Self> {
        if m > ENUMERATION_LIMIT {
            return Err(Error::Budget {
                what: "run enumeration length",
                needed: m as u64,
                budget: ENUMERATION_LIMIT as u64,
            });
        }
        let n = m as usize;
        let mut counts = vec![vec![0u64; n + 1]; n + 1];
        for seq in 0u32..(1u32 << m) {
            counts[longest_run(seq) as usize][seq.count_ones() as usize] += 1;
        }
        Ok(Self { m, counts })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of sequences whose longest run of ones is at least `k`.
    pub fn count_at_least(&self, k: u32) -> u64 {
        self.counts[k as usize..].iter().flatten().sum()
    }

    pub fn probability(&self, k: u32, mu: &BigRational) -> BigRational {
        let one = BigRational::one();
        let nu = &one - mu;
        let n = self.m as usize;
        let mut per_ones = vec![0u64; n + 1];
        for row in &self.counts[k as usize..] {
            for (j, c) in row.iter().enumerate() {
                per_ones[j] += c;
            }
        }
        let mut total = BigRational::zero();
        for (j, &c) in per_ones.iter().enumerate() {
            if c > 0 {
                let w = pow(mu, j as u32) * pow(&nu, (n - j) as u32);
                total += w * BigRational::from_integer(BigInt::from(c));
            }
        }
        total
    }
}

/// Length of the longest block of set bits.
fn longest_run(mut x: u32) -> u32 {
    let mut n = 0;
    while x != 0 {
        x &= x << 1;
        n += 1;
    }
    n
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

fn check_rational_unit(mu: &BigRational) -> Result<()> {
    if *mu < BigRational::zero() || *mu > BigRational::one() {
        return Err(invalid("mu", "must lie in [0, 1]"));
    }
    Ok(())
}

fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("probability is finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn bound_values() {
        assert_eq!(consecutive_ones_bound(1.0, 3, 7).unwrap(), 1.0);
        assert_eq!(consecutive_ones_bound_rational(&ratio(1, 2), 2, 4).unwrap(), ratio(7, 16));
    }

    #[test]
    fn four_fair_coins() {
        assert_eq!(run_probability_exact_rational(4, 2, &ratio(1, 2)).unwrap(), ratio(1, 2));
        assert_eq!(RunTable::enumerate(4).unwrap().count_at_least(2), 8);
    }

    #[test]
    fn closed_forms() {
        let mu = ratio(3, 10);
        let one = BigRational::one();
        for m in 1..=10 {
            assert_eq!(run_probability_exact_rational(m, m, &mu).unwrap(), pow(&mu, m));
            assert_eq!(
                run_probability_exact_rational(m, 1, &mu).unwrap(),
                &one - pow(&(&one - &mu), m)
            );
        }
    }

    #[test]
    fn longest_run_bits() {
        assert_eq!(longest_run(0), 0);
        assert_eq!(longest_run(0b1011_1001), 3);
        assert_eq!(longest_run(u32::MAX), 32);
    }

    #[test]
    fn preconditions() {
        assert!(consecutive_ones_bound(0.5, 0, 3).is_err());
        assert!(consecutive_ones_bound(0.5, 4, 3).is_err());
        assert!(consecutive_ones_bound(1.5, 1, 3).is_err());
        assert!(matches!(run_probability_exact(25, 2, 0.5), Err(Error::Budget { .. })));
    }
}
