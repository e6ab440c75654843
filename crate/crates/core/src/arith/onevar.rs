//! Classical one-variable arithmetic functions and their tables.

use super::sieve::{FactorSieve, Factorization};
use crate::error::Result;

pub fn mobius(f: &Factorization) -> i64 {
    if f.pairs().iter().any(|&(_, e)| e > 1) {
        0
    } else if f.pairs().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn phi(f: &Factorization) -> i64 {
    f.pairs()
        .iter()
        .map(|&(p, e)| ((p - 1) * p.pow(e - 1)) as i64)
        .product()
}

pub fn sigma(f: &Factorization) -> i64 {
    f.pairs()
        .iter()
        .map(|&(p, e)| ((p.pow(e + 1) - 1) / (p - 1)) as i64)
        .product()
}

pub fn omega(f: &Factorization) -> u32 {
    f.pairs().len() as u32
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// All divisors of `n` in increasing order (trial division).
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// One-variable functions used as building blocks of gcd-structured summands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OneVar {
    One,
    Id,
    Sigma,
    Phi,
    /// `n·μ²(n)`
    SquarefreeId,
    /// `φ(n)/n`, real-valued
    PhiOverId,
}

/// Table of a one-variable function on `0..=n` (index 0 unused).
#[derive(Debug, Clone, PartialEq)]
pub enum OneVarTable {
    Int(Vec<i64>),
    Real(Vec<f64>),
}

impl OneVarTable {
    pub fn len(&self) -> usize {
        match self {
            OneVarTable::Int(v) => v.len(),
            OneVarTable::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl OneVar {
    pub fn name(self) -> &'static str {
        match self {
            OneVar::One => "one",
            OneVar::Id => "id",
            OneVar::Sigma => "sigma",
            OneVar::Phi => "phi",
            OneVar::SquarefreeId => "id_squarefree",
            OneVar::PhiOverId => "phi_over_id",
        }
    }

    pub fn is_integer(self) -> bool {
        !matches!(self, OneVar::PhiOverId)
    }

    /// Tabulates the function on `1..=n`, building a sieve if needed.
    pub fn table(self, n: u64) -> Result<OneVarTable> {
        let sieve = if matches!(self, OneVar::One | OneVar::Id) {
            None
        } else {
            Some(super::sieve::build_sieve(n.max(2))?)
        };
        self.table_with(n, sieve.as_ref())
    }

    pub fn table_with(self, n: u64, sieve: Option<&FactorSieve>) -> Result<OneVarTable> {
        let len = n as usize + 1;
        let factor = |m: u64| -> Result<Factorization> {
            sieve.expect("sieve required for this function").factorize(m)
        };
        Ok(match self {
            OneVar::One => {
                let mut v = vec![1i64; len];
                v[0] = 0;
                OneVarTable::Int(v)
            }
            OneVar::Id => OneVarTable::Int((0..len as i64).collect()),
            OneVar::Sigma | OneVar::Phi | OneVar::SquarefreeId => {
                let mut v = vec![0i64; len];
                for m in 1..len as u64 {
                    let f = factor(m)?;
                    v[m as usize] = match self {
                        OneVar::Sigma => sigma(&f),
                        OneVar::Phi => phi(&f),
                        _ => m as i64 * mobius(&f).abs(),
                    };
                }
                OneVarTable::Int(v)
            }
            OneVar::PhiOverId => {
                let mut v = vec![0f64; len];
                for m in 1..len as u64 {
                    v[m as usize] = phi(&factor(m)?) as f64 / m as f64;
                }
                OneVarTable::Real(v)
            }
        })
    }
}

/// Möbius transform `(F∗μ)(n)` on `1..=n`, by in-place inversion of `g∗𝟙 = F`.
pub fn mobius_transform(table: &OneVarTable) -> OneVarTable {
    match table {
        OneVarTable::Int(f) => {
            let mut g = f.clone();
            let n = g.len().saturating_sub(1);
            for d in 1..=n {
                let gd = g[d];
                if gd != 0 {
                    for m in (2 * d..=n).step_by(d) {
                        g[m] -= gd;
                    }
                }
            }
            OneVarTable::Int(g)
        }
        OneVarTable::Real(f) => {
            let mut g = f.clone();
            let n = g.len().saturating_sub(1);
            for d in 1..=n {
                let gd = g[d];
                if gd != 0.0 {
                    for m in (2 * d..=n).step_by(d) {
                        g[m] -= gd;
                    }
                }
            }
            OneVarTable::Real(g)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve::build_sieve;

    #[test]
    fn classical_values() {
        let s = build_sieve(100).unwrap();
        let f = |n| s.factorize(n).unwrap();
        assert_eq!(mobius(&f(1)), 1);
        assert_eq!(mobius(&f(30)), -1);
        assert_eq!(mobius(&f(12)), 0);
        assert_eq!(phi(&f(36)), 12);
        assert_eq!(sigma(&f(12)), 28);
        assert_eq!(omega(&f(60)), 3);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn mobius_transforms_of_sigma_and_id() {
        // σ∗μ = Id and Id∗μ = φ
        let n = 500;
        let sig = OneVar::Sigma.table(n).unwrap();
        assert_eq!(mobius_transform(&sig), OneVar::Id.table(n).unwrap());
        let id = OneVar::Id.table(n).unwrap();
        assert_eq!(mobius_transform(&id), OneVar::Phi.table(n).unwrap());
    }

    #[test]
    fn mobius_transform_matches_divisor_sum() {
        let n = 300u64;
        let s = build_sieve(n).unwrap();
        let OneVarTable::Int(phi_t) = OneVar::Phi.table(n).unwrap() else { unreachable!() };
        let OneVarTable::Int(w) = mobius_transform(&OneVarTable::Int(phi_t.clone())) else {
            unreachable!()
        };
        for m in 1..=n {
            let direct: i64 = divisors(m)
                .into_iter()
                .map(|d| phi_t[d as usize] * mobius(&s.factorize(m / d).unwrap()))
                .sum();
            assert_eq!(w[m as usize], direct, "m = {m}");
        }
    }
}
