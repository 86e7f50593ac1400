//! Smallest-prime-factor sieve and factorization primitives.
//!
//! Everything downstream (splits, graphs, ledgers) factors numbers
//! constantly, so the sieve precomputes the smallest prime factor of every
//! m up to a fixed limit once; factoring is then O(number of prime
//! factors) per query. A sorted prime list is kept alongside for O(log)
//! prime counting.

use crate::{Error, Result};

/// Smallest-prime-factor table over `2..=limit` plus a sorted prime list.
///
/// Immutable once built; queries above `limit` return `Error::OutOfRange`.
pub struct FactorSieve {
    limit: u64,
    // spf[m] = smallest prime factor of m, for 2 <= m <= limit; 0 and 1 unused.
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl FactorSieve {
    /// Builds the table. `limit` must be at least 2 and fit in u32.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be >= 2, got {limit}"
            )));
        }
        if limit > u32::MAX as u64 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit {limit} exceeds u32 range"
            )));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for m in 2..=n {
            if spf[m] == 0 {
                spf[m] = m as u32;
                primes.push(m as u32);
                let mut j = m * m;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = m as u32;
                    }
                    j += m;
                }
            }
        }
        Ok(FactorSieve { limit, spf, primes })
    }

    /// Largest m this sieve answers queries for.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of m. Requires 2 <= m <= limit.
    pub fn spf(&self, m: u64) -> Result<u64> {
        self.check(m)?;
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "smallest prime factor undefined for {m}"
            )));
        }
        Ok(self.spf[m as usize] as u64)
    }

    /// True iff m is prime. m = 0, 1 are not prime.
    pub fn is_prime(&self, m: u64) -> Result<bool> {
        self.check(m)?;
        Ok(m >= 2 && self.spf[m as usize] as u64 == m)
    }

    /// Number of prime factors of m counted with multiplicity; omega(1) = 0.
    pub fn big_omega(&self, m: u64) -> Result<u32> {
        self.check(m)?;
        if m == 0 {
            return Err(Error::InvalidArgument(
                "prime factor count undefined for 0".into(),
            ));
        }
        let mut m = m as usize;
        let mut count = 0;
        while m > 1 {
            m /= self.spf[m] as usize;
            count += 1;
        }
        Ok(count)
    }

    /// Prime factors of m in nonincreasing order; empty for m = 1.
    pub fn factor_desc(&self, m: u64) -> Result<Vec<u64>> {
        self.check(m)?;
        if m == 0 {
            return Err(Error::InvalidArgument(
                "factorization undefined for 0".into(),
            ));
        }
        let mut m = m as usize;
        let mut factors = Vec::new();
        while m > 1 {
            let p = self.spf[m] as u64;
            factors.push(p);
            m /= p as usize;
        }
        // spf peeling yields nondecreasing primes.
        factors.reverse();
        Ok(factors)
    }

    /// (prime, exponent) pairs of m in increasing prime order.
    pub fn factor_pairs(&self, m: u64) -> Result<Vec<(u64, u32)>> {
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        for p in self.factor_desc(m)?.into_iter().rev() {
            match pairs.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => pairs.push((p, 1)),
            }
        }
        Ok(pairs)
    }

    /// All divisors of m in increasing order.
    pub fn divisors(&self, m: u64) -> Result<Vec<u64>> {
        let pairs = self.factor_pairs(m)?;
        let mut divs = vec![1u64];
        for (p, e) in pairs {
            let prev = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..prev {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }

    /// Number of primes <= x. x may be any value up to the sieve limit.
    pub fn prime_pi(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        if x > u32::MAX as u64 {
            return Err(Error::OutOfRange {
                what: "prime count argument",
                value: x,
                limit: u32::MAX as u64,
            });
        }
        Ok(self.primes.partition_point(|&p| p as u64 <= x) as u64)
    }

    /// Primes <= x in increasing order.
    pub fn primes_upto(&self, x: u64) -> Result<impl Iterator<Item = u64> + '_> {
        let count = self.prime_pi(x)? as usize;
        Ok(self.primes[..count].iter().map(|&p| p as u64))
    }

    /// Squarefree kernel of m: the product of primes dividing m to an odd
    /// power. The product of a set is a perfect square iff the merged
    /// kernel of the set is 1.
    pub fn squarefree_kernel(&self, m: u64) -> Result<u64> {
        let pairs = self.factor_pairs(m)?;
        Ok(pairs
            .into_iter()
            .filter(|&(_, e)| e % 2 == 1)
            .map(|(p, _)| p)
            .product())
    }

    fn check(&self, m: u64) -> Result<()> {
        if m > self.limit {
            Err(Error::OutOfRange {
                what: "sieve query",
                value: m,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// Merges two squarefree kernels: the kernel of a product x*y given the
/// kernels of the factors. Shared primes cancel in pairs.
pub fn merge_kernels(a: u128, b: u128) -> u128 {
    let g = gcd_u128(a, b);
    (a / g) * (b / g)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Floor of the square root, exact for all u64 values.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}
