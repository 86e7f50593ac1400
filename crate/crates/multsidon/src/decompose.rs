//! Two-case factorization splits `m = u * v` relative to a bound n.
//!
//! Every 1 <= m <= n admits a split where either
//!
//! 1. u is a prime exceeding n^(2/3) (`LargePrime`), or
//! 2. both u and v are at most n^(2/3) and `2*omega(u) - 2 <= omega(v)`
//!    (`Balanced`).
//!
//! [`lemma_decompose`] produces one constructively: take the largest prime
//! factor if it is big, otherwise the shortest nonincreasing prefix of the
//! factorization whose product reaches m^(1/3). [`min_v_decompose`] picks
//! the valid split with the smallest v; [`enumerate_valid_splits`] is the
//! exhaustive trial-division oracle the minimal choice is checked against.
//!
//! All boundary comparisons are exact: `u > n^(2/3)` is evaluated as
//! `u^3 > n^2` and `u >= m^(1/3)` as `u^3 >= m`, in 128-bit integers.

use crate::arith::FactorSieve;
use crate::{Error, Result};
use serde::Serialize;

/// Which of the two split conditions a decomposition satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SplitCase {
    /// u is prime and u^3 > n^2.
    LargePrime,
    /// u^3 <= n^2, v^3 <= n^2, and 2*omega(u) - 2 <= omega(v).
    Balanced,
}

/// A split m = u * v together with the condition it satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub m: u64,
    pub u: u64,
    pub v: u64,
    pub case: SplitCase,
}

/// True iff x > n^(2/3), decided exactly as x^3 > n^2.
pub fn exceeds_two_thirds(x: u64, n: u64) -> bool {
    let x = x as u128;
    let n = n as u128;
    x * x * x > n * n
}

fn check_args(m: u64, n: u64, sieve: &FactorSieve) -> Result<()> {
    if n > sieve.limit() {
        return Err(Error::OutOfRange {
            what: "split bound n",
            value: n,
            limit: sieve.limit(),
        });
    }
    if m < 1 || m > n {
        return Err(Error::InvalidArgument(format!(
            "split requires 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// Constructive split: largest prime factor if it exceeds n^(2/3),
/// otherwise the shortest prefix of the nonincreasing factorization whose
/// product u satisfies u^3 >= m. m = 1 yields (1, 1, Balanced).
pub fn lemma_decompose(m: u64, n: u64, sieve: &FactorSieve) -> Result<Decomposition> {
    check_args(m, n, sieve)?;
    let factors = sieve.factor_desc(m)?;
    if let Some(&p1) = factors.first() {
        if exceeds_two_thirds(p1, n) {
            return Ok(Decomposition {
                m,
                u: p1,
                v: m / p1,
                case: SplitCase::LargePrime,
            });
        }
    }
    let mut u = 1u64;
    for &p in &factors {
        if (u as u128).pow(3) >= m as u128 {
            break;
        }
        u *= p;
    }
    Ok(Decomposition {
        m,
        u,
        v: m / u,
        case: SplitCase::Balanced,
    })
}

/// Valid split with the smallest v among all of m's divisor pairs. A prime
/// factor above n^(2/3) forces the large-prime split, so minimizing over
/// both conditions is well defined.
pub fn min_v_decompose(m: u64, n: u64, sieve: &FactorSieve) -> Result<Decomposition> {
    check_args(m, n, sieve)?;
    for v in sieve.divisors(m)? {
        let u = m / v;
        if let Some(case) = classify(u, v, n, sieve)? {
            return Ok(Decomposition { m, u, v, case });
        }
    }
    Err(Error::Internal(format!(
        "no valid split for m = {m}, n = {n}; every m <= n must have one"
    )))
}

fn classify(u: u64, v: u64, n: u64, sieve: &FactorSieve) -> Result<Option<SplitCase>> {
    if exceeds_two_thirds(u, n) {
        if sieve.is_prime(u)? {
            return Ok(Some(SplitCase::LargePrime));
        }
        return Ok(None);
    }
    if exceeds_two_thirds(v, n) {
        return Ok(None);
    }
    let wu = sieve.big_omega(u)? as i64;
    let wv = sieve.big_omega(v)? as i64;
    if 2 * wu - 2 <= wv {
        Ok(Some(SplitCase::Balanced))
    } else {
        Ok(None)
    }
}

/// Every valid split of m, ordered by increasing v. Exhaustive trial
/// division over all of 1..=m; the checks are written out independently of
/// [`min_v_decompose`] so this can serve as its oracle.
pub fn enumerate_valid_splits(m: u64, n: u64, sieve: &FactorSieve) -> Result<Vec<Decomposition>> {
    check_args(m, n, sieve)?;
    let mut splits = Vec::new();
    for v in 1..=m {
        if m % v != 0 {
            continue;
        }
        let u = m / v;
        let u3 = (u as u128).pow(3);
        let v3 = (v as u128).pow(3);
        let n2 = (n as u128).pow(2);
        if u3 > n2 && sieve.is_prime(u)? {
            splits.push(Decomposition {
                m,
                u,
                v,
                case: SplitCase::LargePrime,
            });
        } else if u3 <= n2
            && v3 <= n2
            && 2 * (sieve.big_omega(u)? as i64) - 2 <= sieve.big_omega(v)? as i64
        {
            splits.push(Decomposition {
                m,
                u,
                v,
                case: SplitCase::Balanced,
            });
        }
    }
    Ok(splits)
}
