use num_rational::BigRational;

use super::ring::{rational, Scalar};
use crate::arith::Fn2;
use crate::error::{Error, Result};
use crate::value::Value;

/// Values `f(n₁, n₂)` for `1 ≤ n₁, n₂ ≤ bound`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTable2<T> {
    bound: usize,
    values: Vec<T>,
}

impl<T: Scalar> DenseTable2<T> {
    pub fn from_fn(bound: usize, mut f: impl FnMut(u64, u64) -> T) -> Self {
        let mut values = Vec::with_capacity(bound * bound);
        for a in 1..=bound as u64 {
            for b in 1..=bound as u64 {
                values.push(f(a, b));
            }
        }
        DenseTable2 { bound, values }
    }

    pub fn delta(bound: usize) -> Self {
        Self::from_fn(bound, |a, b| if a == 1 && b == 1 { T::one() } else { T::zero() })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    #[inline]
    pub fn get(&self, n1: u64, n2: u64) -> &T {
        &self.values[(n1 as usize - 1) * self.bound + n2 as usize - 1]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DenseTable2<U> {
        DenseTable2 {
            bound: self.bound,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn is_delta(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(i, v)| if i == 0 { *v == T::one() } else { v.is_zero() })
    }
}

impl DenseTable2<i128> {
    /// Exact integer table of an integer-valued function.
    pub fn from_fn2(f: &Fn2, bound: usize) -> Result<Self> {
        let mut real = false;
        let t = Self::from_fn(bound, |a, b| match f.eval(a, b) {
            Value::Int(v) => v,
            Value::Real(_) => {
                real = true;
                0
            }
        });
        if real {
            return Err(Error::Domain(format!("`{}` is not integer-valued", f.name())));
        }
        Ok(t)
    }
}

/// Divisors of every `n ≤ bound`, ascending.
pub(crate) fn divisor_lists(bound: usize) -> Vec<Vec<u32>> {
    let mut d = vec![Vec::new(); bound + 1];
    for i in 1..=bound {
        for m in (i..=bound).step_by(i) {
            d[m].push(i as u32);
        }
    }
    d
}

/// Dirichlet convolution of two tables on their common range.
pub fn convolve_tables<T: Scalar>(f: &DenseTable2<T>, g: &DenseTable2<T>) -> Result<DenseTable2<T>> {
    let bound = f.bound.min(g.bound);
    let divs = divisor_lists(bound);
    let overflow = || Error::Overflow("table convolution");
    let mut values = Vec::with_capacity(bound * bound);
    for n1 in 1..=bound {
        for n2 in 1..=bound {
            let mut s = T::zero();
            for &d1 in &divs[n1] {
                for &d2 in &divs[n2] {
                    let (d1, d2) = (d1 as u64, d2 as u64);
                    let t = f
                        .get(d1, d2)
                        .checked_mul(g.get(n1 as u64 / d1, n2 as u64 / d2))
                        .ok_or_else(overflow)?;
                    s = s.checked_add(&t).ok_or_else(overflow)?;
                }
            }
            values.push(s);
        }
    }
    Ok(DenseTable2 { bound, values })
}

/// Dirichlet inverse on `[1, bound]²` by row-major recursion over the divisor lattice.
pub fn inverse_table<T: Scalar>(f: &DenseTable2<T>) -> Result<DenseTable2<T>> {
    let origin = f.get(1, 1).clone();
    if origin.is_zero() {
        return Err(Error::NotInvertible);
    }
    let inv_origin = T::one().exact_div(&origin).ok_or(Error::NotUnit)?;
    let bound = f.bound;
    let divs = divisor_lists(bound);
    let overflow = || Error::Overflow("table inversion");
    let mut g = DenseTable2 { bound, values: vec![T::zero(); bound * bound] };
    g.values[0] = inv_origin.clone();
    for n1 in 1..=bound {
        for n2 in 1..=bound {
            if n1 == 1 && n2 == 1 {
                continue;
            }
            let mut s = T::zero();
            for &d1 in &divs[n1] {
                for &d2 in &divs[n2] {
                    if d1 == 1 && d2 == 1 {
                        continue;
                    }
                    let (d1, d2) = (d1 as u64, d2 as u64);
                    let t = f
                        .get(d1, d2)
                        .checked_mul(g.get(n1 as u64 / d1, n2 as u64 / d2))
                        .ok_or_else(overflow)?;
                    s = s.checked_add(&t).ok_or_else(overflow)?;
                }
            }
            let v = T::zero()
                .checked_sub(&s)
                .and_then(|v| v.checked_mul(&inv_origin))
                .ok_or_else(overflow)?;
            g.values[(n1 - 1) * bound + n2 - 1] = v;
        }
    }
    Ok(g)
}

/// Inverse of an integer table: exact integers when `f(1,1) = ±1`, rationals otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum InverseTable {
    Integer(DenseTable2<i128>),
    Rational(DenseTable2<BigRational>),
}

pub fn invert_integer_table(f: &DenseTable2<i128>) -> Result<InverseTable> {
    match inverse_table(f) {
        Ok(g) => Ok(InverseTable::Integer(g)),
        Err(Error::NotUnit) => inverse_table(&f.map(|&v| rational(v))).map(InverseTable::Rational),
        Err(e) => Err(e),
    }
}
