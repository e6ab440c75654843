use std::fmt;
use std::sync::Arc;

use super::onevar::{divisors, OneVar};
use super::sieve::FactorSieve;
use crate::error::{Error, Result};
use crate::value::Value;

type Eval2 = dyn Fn(u64, u64) -> Value + Send + Sync;
type LocalFn = dyn Fn(u64, u32, u32) -> Value + Send + Sync;

/// Structural description `f(n₁,n₂) = u(n₁)·u(n₂)·F(gcd(n₁,n₂))`, optionally
/// convolved once with 𝟙. Lets the summation engine pick an exact acceleration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcdShape {
    /// `u`, applied to each coordinate.
    pub outer: OneVar,
    /// `F`, applied to the gcd.
    pub inner: OneVar,
    /// Whether the function is the above convolved with 𝟙.
    pub conv_one: bool,
}

/// An arithmetic function of two positive integer variables.
#[derive(Clone)]
pub struct Fn2 {
    name: Arc<str>,
    eval: Arc<Eval2>,
    shape: Option<GcdShape>,
}

impl Fn2 {
    pub fn new<F>(name: impl Into<Arc<str>>, eval: F) -> Self
    where
        F: Fn(u64, u64) -> Value + Send + Sync + 'static,
    {
        Fn2 {
            name: name.into(),
            eval: Arc::new(eval),
            shape: None,
        }
    }

    pub fn with_shape(mut self, shape: GcdShape) -> Self {
        self.shape = Some(shape);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> Option<GcdShape> {
        self.shape
    }

    #[inline]
    pub fn eval(&self, n1: u64, n2: u64) -> Value {
        (self.eval)(n1, n2)
    }

    /// Lazily evaluated `f₁∗f₂∗⋯∗f_r`, computed per point over the divisor lattice.
    pub fn convolution_of(name: impl Into<Arc<str>>, factors: Vec<Fn2>) -> Fn2 {
        assert!(!factors.is_empty(), "convolution of no factors");
        Fn2::new(name, move |n1, n2| DivisorLattice::new(n1, n2).fold(&factors))
    }

    /// Lazily evaluated Dirichlet inverse, by the lattice recursion at each point.
    pub fn inverse_of(name: impl Into<Arc<str>>, f: Fn2) -> Fn2 {
        Fn2::new(name, move |n1, n2| DivisorLattice::new(n1, n2).inverse(&f))
    }
}

impl fmt::Debug for Fn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fn2")
            .field("name", &self.name)
            .field("shape", &self.shape)
            .finish()
    }
}

/// The divisor pairs `(d₁,d₂)` with `d₁ | n₁`, `d₂ | n₂`, with divisibility links.
pub(crate) struct DivisorLattice {
    d1: Vec<u64>,
    d2: Vec<u64>,
    /// For each index i: pairs (i', q) with d[i'] | d[i] and d[q] = d[i]/d[i'].
    links1: Vec<Vec<(usize, usize)>>,
    links2: Vec<Vec<(usize, usize)>>,
}

impl DivisorLattice {
    pub(crate) fn new(n1: u64, n2: u64) -> Self {
        let d1 = divisors(n1);
        let d2 = divisors(n2);
        let links1 = Self::links(&d1);
        let links2 = Self::links(&d2);
        DivisorLattice { d1, d2, links1, links2 }
    }

    fn links(d: &[u64]) -> Vec<Vec<(usize, usize)>> {
        d.iter()
            .map(|&u| {
                d.iter()
                    .enumerate()
                    .filter(|&(_, &v)| u % v == 0)
                    .map(|(i, &v)| (i, d.binary_search(&(u / v)).expect("quotient divides n")))
                    .collect()
            })
            .collect()
    }

    fn tabulate(&self, f: &Fn2) -> Vec<Value> {
        let mut t = Vec::with_capacity(self.d1.len() * self.d2.len());
        for &a in &self.d1 {
            for &b in &self.d2 {
                t.push(f.eval(a, b));
            }
        }
        t
    }

    fn fold(&self, factors: &[Fn2]) -> Value {
        let w = self.d2.len();
        let mut acc = self.tabulate(&factors[0]);
        for f in &factors[1..] {
            let ft = self.tabulate(f);
            let mut next = vec![Value::ZERO; acc.len()];
            for i in 0..self.d1.len() {
                for j in 0..w {
                    let mut s = Value::ZERO;
                    for &(i2, qi) in &self.links1[i] {
                        for &(j2, qj) in &self.links2[j] {
                            s = s.add_or_real(acc[i2 * w + j2].mul_or_real(ft[qi * w + qj]));
                        }
                    }
                    next[i * w + j] = s;
                }
            }
            acc = next;
        }
        *acc.last().expect("lattice is never empty")
    }

    fn inverse(&self, f: &Fn2) -> Value {
        let w = self.d2.len();
        let ft = self.tabulate(f);
        let origin = ft[0];
        let mut g = vec![Value::ZERO; ft.len()];
        for i in 0..self.d1.len() {
            for j in 0..w {
                let mut s = if i == 0 && j == 0 { Value::ONE } else { Value::ZERO };
                for &(i2, qi) in &self.links1[i] {
                    for &(j2, qj) in &self.links2[j] {
                        if i2 == i && j2 == j {
                            continue;
                        }
                        s = s.add_or_real(g[i2 * w + j2].mul_or_real(ft[qi * w + qj]).negated());
                    }
                }
                g[i * w + j] = divide_by_origin(s, origin);
            }
        }
        *g.last().expect("lattice is never empty")
    }
}

fn divide_by_origin(v: Value, origin: Value) -> Value {
    match origin {
        Value::Int(1) => v,
        Value::Int(-1) => v.negated(),
        o => Value::Real(v.as_f64() / o.as_f64()),
    }
}

/// A multiplicative function given by its values `h(p, ν₁, ν₂)` at prime-power pairs.
#[derive(Clone)]
pub struct PrimePowerSpec {
    name: Arc<str>,
    local: Arc<LocalFn>,
}

impl PrimePowerSpec {
    pub fn new<F>(name: impl Into<Arc<str>>, local: F) -> Self
    where
        F: Fn(u64, u32, u32) -> Value + Send + Sync + 'static,
    {
        PrimePowerSpec {
            name: name.into(),
            local: Arc::new(local),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `f(p^a, p^b)`; equals 1 at `a = b = 0`.
    #[inline]
    pub fn local(&self, p: u64, a: u32, b: u32) -> Value {
        if a == 0 && b == 0 {
            return Value::ONE;
        }
        (self.local)(p, a, b)
    }

    /// `f(p^a, p^b) / p^(a+b)` in floating point.
    #[inline]
    pub fn weighted(&self, p: u64, a: u32, b: u32) -> f64 {
        self.local(p, a, b).as_f64() * (p as f64).powi(-((a + b) as i32))
    }

    /// Local Dirichlet convolution `(f∗g)(p^a,p^b) = Σ f(p^i,p^j) g(p^{a-i},p^{b-j})`.
    pub fn convolve(&self, other: &PrimePowerSpec) -> PrimePowerSpec {
        let (f, g) = (self.clone(), other.clone());
        PrimePowerSpec::new(format!("{}*{}", self.name, other.name), move |p, a, b| {
            let mut s = Value::ZERO;
            for i in 0..=a {
                for j in 0..=b {
                    let fv = f.local(p, i, j);
                    if fv.is_zero() {
                        continue;
                    }
                    s = s.add_or_real(fv.mul_or_real(g.local(p, a - i, b - j)));
                }
            }
            s
        })
    }

    /// The induced two-variable function on `1..=sieve.bound()`.
    pub fn to_fn2(&self, sieve: Arc<FactorSieve>) -> Fn2 {
        let spec = self.clone();
        Fn2::new(self.name.clone(), move |n1, n2| {
            eval_multiplicative(&spec, n1, n2, &sieve).expect("arguments within the sieve bound")
        })
    }
}

impl fmt::Debug for PrimePowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimePowerSpec").field("name", &self.name).finish()
    }
}

/// `∏_{p | n₁n₂} h(p, v_p(n₁), v_p(n₂))`, factoring `n₁` and `n₂` separately.
pub fn eval_multiplicative(
    spec: &PrimePowerSpec,
    n1: u64,
    n2: u64,
    sieve: &FactorSieve,
) -> Result<Value> {
    let f1 = sieve.factorize(n1)?;
    let f2 = sieve.factorize(n2)?;
    let mut acc = Value::ONE;
    for (p, a, b) in f1.merge(&f2) {
        acc = acc
            .checked_mul(spec.local(p, a, b))
            .ok_or(Error::Overflow("evaluating a multiplicative function"))?;
    }
    Ok(acc)
}
