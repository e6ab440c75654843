use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::compensated::Compensated;
use crate::arith::onevar::mobius_transform;
use crate::arith::{build_sieve, Fn2, GcdShape, OneVar, OneVarTable};
use crate::error::{Error, Result};
use crate::value::Value;

pub const DEFAULT_POINT_BUDGET: u64 = 200_000_000;
pub const DEFAULT_BLOCKS: usize = 64;

/// Limits and parallel layout for summations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SumConfig {
    /// Largest number of lattice points a quadratic-cost sum may visit.
    pub point_budget: u64,
    /// Number of contiguous blocks reduced in ascending order. Results depend
    /// on this value but never on the thread count.
    pub blocks: usize,
}

impl Default for SumConfig {
    fn default() -> Self {
        SumConfig {
            point_budget: DEFAULT_POINT_BUDGET,
            blocks: DEFAULT_BLOCKS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    GcdComposed,
    ConvOne,
    PhiWeighted,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::GcdComposed => "gcd_composed",
            Method::ConvOne => "conv_one",
            Method::PhiWeighted => "phi_weighted",
        })
    }
}

/// A partial sum over the box `[1, x] × [1, y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumResult {
    pub x: f64,
    pub y: f64,
    pub value: Value,
    /// Lattice points in the box, `⌊x⌋·⌊y⌋`.
    pub terms: u128,
    pub method: Method,
    pub blocks: usize,
}

/// Exact integer accumulation that degrades to compensated floats on overflow
/// or on the first real-valued term.
#[derive(Debug, Clone, Default)]
pub(crate) struct ValueAcc {
    int: i128,
    real: Compensated,
    inexact: bool,
}

impl ValueAcc {
    #[inline]
    pub(crate) fn add(&mut self, v: Value) {
        match v {
            Value::Int(i) => match self.int.checked_add(i) {
                Some(s) => self.int = s,
                None => {
                    self.real.add(self.int as f64);
                    self.real.add(i as f64);
                    self.int = 0;
                    self.inexact = true;
                }
            },
            Value::Real(r) => {
                self.real.add(r);
                self.inexact = true;
            }
        }
    }

    pub(crate) fn merge(&mut self, other: &ValueAcc) {
        self.add(Value::Int(other.int));
        self.real.merge(&other.real);
        self.inexact |= other.inexact;
    }

    pub(crate) fn finish(&self) -> Value {
        if self.inexact {
            let mut r = self.real;
            r.add(self.int as f64);
            Value::Real(r.value())
        } else {
            Value::Int(self.int)
        }
    }
}

/// Floors a real bound once; all later logic works with the integer part.
pub(crate) fn floor_bound(x: f64) -> Result<u64> {
    if !x.is_finite() || x < 1.0 {
        return Err(Error::Domain(format!("summation bound {x} must be finite and at least 1")));
    }
    Ok(x.floor() as u64)
}

/// Splits `1..=n` into `blocks` contiguous ranges, sums each in parallel and
/// reduces in ascending order.
pub(crate) fn blocked_sum(n: u64, blocks: usize, row: impl Fn(u64, &mut ValueAcc) + Sync) -> Value {
    let blocks = blocks.max(1) as u64;
    let accs: Vec<ValueAcc> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let (lo, hi) = (n * b / blocks + 1, n * (b + 1) / blocks);
            let mut acc = ValueAcc::default();
            for i in lo..=hi {
                row(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = ValueAcc::default();
    for a in &accs {
        total.merge(a);
    }
    total.finish()
}

fn check_budget(points: u128, cfg: &SumConfig) -> Result<()> {
    if points > cfg.point_budget as u128 {
        return Err(Error::BudgetExceeded {
            points,
            budget: cfg.point_budget,
        });
    }
    Ok(())
}

/// `Σ_{n₁ ≤ x, n₂ ≤ y} f(n₁, n₂)` by visiting every lattice point.
pub fn partial_sum_direct(f: &Fn2, x: f64, y: f64, cfg: &SumConfig) -> Result<SumResult> {
    let (nx, ny) = (floor_bound(x)?, floor_bound(y)?);
    let terms = nx as u128 * ny as u128;
    check_budget(terms, cfg)?;
    let value = blocked_sum(nx, cfg.blocks, |n1, acc| {
        for n2 in 1..=ny {
            acc.add(f.eval(n1, n2));
        }
    });
    Ok(SumResult { x, y, value, terms, method: Method::Direct, blocks: cfg.blocks })
}

/// Accelerated sums of `g(n₁,n₂) = u(n₁)u(n₂)F(gcd(n₁,n₂))` and of `g∗𝟙`.
///
/// With `w = F∗μ` one has `g(d₁,d₂) = u(d₁)u(d₂)Σ_{e | (d₁,d₂)} w(e)`, so every
/// box sum collapses to a single sum over `e` of products of one-variable sums.
#[derive(Debug, Clone)]
pub struct ShapeSummer {
    shape: GcdShape,
    bound: u64,
    u: OneVarTable,
    w: OneVarTable,
    /// Divisor summatory function `D(n) = Σ_{m ≤ n} ⌊n/m⌋`, only for `u ≡ 1`.
    dsum: Option<Vec<i128>>,
}

impl ShapeSummer {
    /// Prepares tables on `1..=bound`; `shape.conv_one` selects the default summand.
    pub fn new(shape: GcdShape, bound: u64) -> Result<ShapeSummer> {
        let bound = bound.max(1);
        let sieve = build_sieve(bound)?;
        let u = shape.outer.table_with(bound, Some(&sieve))?;
        let w = mobius_transform(&shape.inner.table_with(bound, Some(&sieve))?);
        let dsum = (shape.outer == OneVar::One && shape.conv_one).then(|| divisor_summatory(bound));
        Ok(ShapeSummer { shape, bound, u, w, dsum })
    }

    pub fn shape(&self) -> GcdShape {
        self.shape
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Box sum of the summand described by the shape.
    pub fn sum(&self, x: f64, y: f64, cfg: &SumConfig) -> Result<SumResult> {
        let (nx, ny) = (floor_bound(x)?, floor_bound(y)?);
        let n = nx.max(ny);
        if n > self.bound {
            return Err(Error::OutOfRange { n, bound: self.bound });
        }
        let conv = self.shape.conv_one;
        let plain_gcd = self.shape.outer == OneVar::One && !conv;
        let value = blocked_sum(nx.min(ny), cfg.blocks, |e, acc| {
            let w = self.w_at(e);
            if w.is_zero() {
                return;
            }
            let (qx, qy) = (nx / e, ny / e);
            let term = if plain_gcd {
                w.mul_or_real(Value::Int(qx as i128 * qy as i128))
            } else if let Some(d) = &self.dsum {
                w.mul_or_real(Value::Int(d[qx as usize])).mul_or_real(Value::Int(d[qy as usize]))
            } else {
                w.mul_or_real(self.inner(e, nx, conv)).mul_or_real(self.inner(e, ny, conv))
            };
            acc.add(term);
        });
        let method = if plain_gcd { Method::GcdComposed } else { Method::PhiWeighted };
        Ok(SumResult { x, y, value, terms: nx as u128 * ny as u128, method, blocks: cfg.blocks })
    }

    fn w_at(&self, e: u64) -> Value {
        match &self.w {
            OneVarTable::Int(v) => Value::Int(v[e as usize] as i128),
            OneVarTable::Real(v) => Value::Real(v[e as usize]),
        }
    }

    /// `Σ_{m ≤ n/e} u(em)·⌊n/(em)⌋` (or without the floor factor).
    fn inner(&self, e: u64, n: u64, conv: bool) -> Value {
        let weight = |m: u64| if conv { n / (e * m) } else { 1 };
        match &self.u {
            OneVarTable::Int(u) => {
                let mut s = 0i128;
                for m in 1..=n / e {
                    s += u[(e * m) as usize] as i128 * weight(m) as i128;
                }
                Value::Int(s)
            }
            OneVarTable::Real(u) => {
                let mut s = Compensated::new();
                for m in 1..=n / e {
                    s.add(u[(e * m) as usize] * weight(m) as f64);
                }
                Value::Real(s.value())
            }
        }
    }
}

/// `D(n)` for `0 ≤ n ≤ bound` from a divisor-count sieve.
fn divisor_summatory(bound: u64) -> Vec<i128> {
    let n = bound as usize;
    let mut tau = vec![0u32; n + 1];
    for d in 1..=n {
        for m in (d..=n).step_by(d) {
            tau[m] += 1;
        }
    }
    let mut acc = 0i128;
    tau.iter()
        .map(|&t| {
            acc += t as i128;
            acc
        })
        .collect()
}

/// `Σ_{n₁,n₂ ≤ x} F(gcd(n₁,n₂)) = Σ_e (F∗μ)(e)·⌊x/e⌋²`.
pub fn partial_sum_gcd_composed(inner: OneVar, x: f64, cfg: &SumConfig) -> Result<SumResult> {
    let shape = GcdShape { outer: OneVar::One, inner, conv_one: false };
    ShapeSummer::new(shape, floor_bound(x)?)?.sum(x, x, cfg)
}

/// `Σ_{n₁,n₂ ≤ x} (g∗𝟙)(n₁,n₂) = Σ_{d₁,d₂ ≤ x} g(d₁,d₂)⌊x/d₁⌋⌊x/d₂⌋`.
///
/// Uses the gcd-weighted rewrite when `g` carries a gcd shape, otherwise visits
/// every pair `(d₁, d₂)` within the point budget.
pub fn partial_sum_conv_one(g: &Fn2, x: f64, cfg: &SumConfig) -> Result<SumResult> {
    let n = floor_bound(x)?;
    if let Some(shape) = g.shape().filter(|s| !s.conv_one) {
        let shape = GcdShape { conv_one: true, ..shape };
        return ShapeSummer::new(shape, n)?.sum(x, x, cfg);
    }
    let terms = n as u128 * n as u128;
    check_budget(terms, cfg)?;
    let value = blocked_sum(n, cfg.blocks, |d1, acc| {
        let q1 = (n / d1) as i128;
        for d2 in 1..=n {
            let v = g.eval(d1, d2);
            if !v.is_zero() {
                acc.add(v.mul_or_real(Value::Int(q1 * (n / d2) as i128)));
            }
        }
    });
    Ok(SumResult { x, y: x, value, terms, method: Method::ConvOne, blocks: cfg.blocks })
}

/// Box sum by the fastest exact method the function's shape allows.
pub fn partial_sum(f: &Fn2, x: f64, y: f64, cfg: &SumConfig) -> Result<SumResult> {
    match f.shape() {
        Some(shape) => {
            let n = floor_bound(x)?.max(floor_bound(y)?);
            ShapeSummer::new(shape, n)?.sum(x, y, cfg)
        }
        None => partial_sum_direct(f, x, y, cfg),
    }
}
