use super::ring::Scalar;
use crate::arith::PrimePowerSpec;
use crate::error::{Error, Result};
use crate::value::Value;

/// Default exponent range `0..=12` for local tables.
pub const DEFAULT_NUMAX: u32 = 12;

/// Values `f(p^a, p^b)` for `0 ≤ a, b ≤ numax` at a fixed prime.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTable<T> {
    p: u64,
    numax: u32,
    values: Vec<T>,
}

impl<T: Scalar> LocalTable<T> {
    pub fn from_fn(p: u64, numax: u32, mut f: impl FnMut(u32, u32) -> T) -> Self {
        let mut values = Vec::with_capacity(((numax + 1) * (numax + 1)) as usize);
        for a in 0..=numax {
            for b in 0..=numax {
                values.push(f(a, b));
            }
        }
        LocalTable { p, numax, values }
    }

    /// The local identity δ: 1 at the origin, 0 elsewhere.
    pub fn delta(p: u64, numax: u32) -> Self {
        Self::from_fn(p, numax, |a, b| if a == 0 && b == 0 { T::one() } else { T::zero() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn numax(&self) -> u32 {
        self.numax
    }

    #[inline]
    pub fn get(&self, a: u32, b: u32) -> &T {
        &self.values[(a * (self.numax + 1) + b) as usize]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LocalTable<U> {
        LocalTable {
            p: self.p,
            numax: self.numax,
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

impl LocalTable<i128> {
    /// Exact integer table of a prime-power description.
    pub fn from_spec(spec: &PrimePowerSpec, p: u64, numax: u32) -> Result<Self> {
        let mut bad = None;
        let t = Self::from_fn(p, numax, |a, b| match spec.local(p, a, b) {
            Value::Int(v) => v,
            Value::Real(_) => {
                bad.get_or_insert((a, b));
                0
            }
        });
        match bad {
            None => Ok(t),
            Some(_) => Err(Error::Overflow("tabulating exact local values")),
        }
    }
}

fn check_prime<T, U>(f: &LocalTable<T>, g: &LocalTable<U>) -> Result<()> {
    if f.p != g.p {
        return Err(Error::PrimeMismatch { left: f.p, right: g.p });
    }
    Ok(())
}

/// `Σ_{i≤a, j≤b} F[i][j]·G[a−i][b−j]`.
pub fn convolve_local<T: Scalar>(f: &LocalTable<T>, g: &LocalTable<T>, a: u32, b: u32) -> Result<T> {
    check_prime(f, g)?;
    if a > f.numax.min(g.numax) || b > f.numax.min(g.numax) {
        return Err(Error::Domain(format!("exponents ({a},{b}) exceed the table range")));
    }
    let overflow = || Error::Overflow("local convolution");
    let mut s = T::zero();
    for i in 0..=a {
        for j in 0..=b {
            let t = f.get(i, j).checked_mul(g.get(a - i, b - j)).ok_or_else(overflow)?;
            s = s.checked_add(&t).ok_or_else(overflow)?;
        }
    }
    Ok(s)
}

/// The full table `F∗G` on the common exponent range.
pub fn convolve_local_tables<T: Scalar>(f: &LocalTable<T>, g: &LocalTable<T>) -> Result<LocalTable<T>> {
    check_prime(f, g)?;
    let numax = f.numax.min(g.numax);
    let mut err = None;
    let t = LocalTable::from_fn(f.p, numax, |a, b| {
        convolve_local(f, g, a, b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            T::zero()
        })
    });
    err.map_or(Ok(t), Err)
}

/// Local Dirichlet inverse by the lattice recursion
/// `G[a][b] = −(1/F[0][0]) Σ_{(i,j)≠(0,0)} F[i][j]·G[a−i][b−j]`.
pub fn inverse_local<T: Scalar>(f: &LocalTable<T>) -> Result<LocalTable<T>> {
    let origin = f.get(0, 0).clone();
    if origin.is_zero() {
        return Err(Error::NotInvertible);
    }
    let inv_origin = T::one().exact_div(&origin).ok_or(Error::NotUnit)?;
    let overflow = || Error::Overflow("local inversion");
    let n = f.numax;
    let w = (n + 1) as usize;
    let mut g: Vec<T> = vec![T::zero(); w * w];
    g[0] = inv_origin.clone();
    for a in 0..=n {
        for b in 0..=n {
            if a == 0 && b == 0 {
                continue;
            }
            let mut s = T::zero();
            for i in 0..=a {
                for j in 0..=b {
                    if i == 0 && j == 0 {
                        continue;
                    }
                    let gv = &g[((a - i) as usize) * w + (b - j) as usize];
                    let t = f.get(i, j).checked_mul(gv).ok_or_else(overflow)?;
                    s = s.checked_add(&t).ok_or_else(overflow)?;
                }
            }
            let v = T::zero()
                .checked_sub(&s)
                .and_then(|v| v.checked_mul(&inv_origin))
                .ok_or_else(overflow)?;
            g[a as usize * w + b as usize] = v;
        }
    }
    Ok(LocalTable { p: f.p, numax: n, values: g })
}
