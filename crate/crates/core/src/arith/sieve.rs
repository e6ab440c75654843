use crate::error::{Error, Result};

/// Largest sieve bound accepted by [`build_sieve`] (4 bytes per entry).
pub const DEFAULT_SIEVE_LIMIT: u64 = 500_000_000;

/// Smallest-prime-factor table for `2..=bound`.
///
/// Immutable after construction and freely shareable across threads.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    bound: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

pub fn build_sieve(bound: u64) -> Result<FactorSieve> {
    build_sieve_with_limit(bound, DEFAULT_SIEVE_LIMIT)
}

/// Linear sieve: every composite is crossed out exactly once by its least prime.
pub fn build_sieve_with_limit(bound: u64, limit: u64) -> Result<FactorSieve> {
    if bound > limit || bound > u32::MAX as u64 {
        return Err(Error::Capacity {
            requested: bound,
            limit: limit.min(u32::MAX as u64),
        });
    }
    let bound = bound.max(2);
    let n = bound as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let least = spf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > least || m > n {
                break;
            }
            spf[m] = p;
        }
    }
    Ok(FactorSieve { bound, spf, primes })
}

impl FactorSieve {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Smallest prime factor of `n` (`2 <= n <= bound`).
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.bound && self.spf[n as usize] as u64 == n
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn primes_up_to(&self, pmax: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| p as u64 <= pmax);
        &self.primes[..end]
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 || n > self.bound {
            return Err(Error::OutOfRange { n, bound: self.bound });
        }
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            pairs.push((p as u64, e));
        }
        Ok(Factorization { pairs })
    }
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Merges two factorizations into `(p, v_p(n1), v_p(n2))` over the primes of `n1·n2`.
    pub fn merge(&self, other: &Factorization) -> Vec<(u64, u32, u32)> {
        let (a, b) = (&self.pairs, &other.pairs);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&(p, e)), Some(&(q, f))) if p == q => {
                    out.push((p, e, f));
                    i += 1;
                    j += 1;
                }
                (Some(&(p, e)), Some(&(q, _))) if p < q => {
                    out.push((p, e, 0));
                    i += 1;
                }
                (Some(&(p, e)), None) => {
                    out.push((p, e, 0));
                    i += 1;
                }
                (_, Some(&(q, f))) => {
                    out.push((q, 0, f));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out
    }
}
