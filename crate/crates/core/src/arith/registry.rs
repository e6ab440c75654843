//! Named arithmetic functions of two variables, each with a direct evaluator
//! and a prime-power description.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::fn2::{Fn2, GcdShape, PrimePowerSpec};
use super::onevar::{self, divisors, gcd, lcm, OneVar};
use super::sieve::{build_sieve, FactorSieve};
use crate::convolution::closed;
use crate::error::{Error, Result};
use crate::value::{pow_value, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinName {
    One,
    Delta,
    Gcd,
    Lcm,
    SigmaGcd,
    PhiGcd,
    KOmega,
    AbsRamanujan,
    F1,
    F2,
    PhiRatio,
    S,
    C,
    A,
    TauK,
    MuK,
    TildeTauK,
    TildeMuK,
    TildeMu,
}

impl BuiltinName {
    pub const ALL: [BuiltinName; 19] = [
        BuiltinName::One,
        BuiltinName::Delta,
        BuiltinName::Gcd,
        BuiltinName::Lcm,
        BuiltinName::SigmaGcd,
        BuiltinName::PhiGcd,
        BuiltinName::KOmega,
        BuiltinName::AbsRamanujan,
        BuiltinName::F1,
        BuiltinName::F2,
        BuiltinName::PhiRatio,
        BuiltinName::S,
        BuiltinName::C,
        BuiltinName::A,
        BuiltinName::TauK,
        BuiltinName::MuK,
        BuiltinName::TildeTauK,
        BuiltinName::TildeMuK,
        BuiltinName::TildeMu,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BuiltinName::One => "one",
            BuiltinName::Delta => "delta",
            BuiltinName::Gcd => "gcd",
            BuiltinName::Lcm => "lcm",
            BuiltinName::SigmaGcd => "sigma_gcd",
            BuiltinName::PhiGcd => "phi_gcd",
            BuiltinName::KOmega => "k_omega",
            BuiltinName::AbsRamanujan => "abs_ramanujan",
            BuiltinName::F1 => "f1",
            BuiltinName::F2 => "f2",
            BuiltinName::PhiRatio => "phi_ratio",
            BuiltinName::S => "s",
            BuiltinName::C => "c",
            BuiltinName::A => "A",
            BuiltinName::TauK => "tau_k",
            BuiltinName::MuK => "mu_k",
            BuiltinName::TildeTauK => "tilde_tau_k",
            BuiltinName::TildeMuK => "tilde_mu_k",
            BuiltinName::TildeMu => "tilde_mu",
        }
    }

    /// Whether the function takes the parameter `k`.
    pub fn takes_k(self) -> bool {
        matches!(
            self,
            BuiltinName::KOmega
                | BuiltinName::TauK
                | BuiltinName::MuK
                | BuiltinName::TildeTauK
                | BuiltinName::TildeMuK
        )
    }

    pub fn is_integer_valued(self) -> bool {
        !matches!(self, BuiltinName::PhiRatio | BuiltinName::A)
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for BuiltinName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BuiltinName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownName {
                name: s.to_string(),
                valid: BuiltinName::valid_names(),
            })
    }
}

/// Parses `name` or `name:k` (e.g. `tau_k:3`), falling back to `default_k`.
pub fn parse_builtin(s: &str, default_k: u32) -> Result<(BuiltinName, u32)> {
    match s.split_once(':') {
        Some((name, k)) => {
            let k = k
                .parse::<u32>()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::Domain(format!("invalid parameter in `{s}`")))?;
            Ok((name.parse()?, k))
        }
        None => Ok((s.parse()?, default_k)),
    }
}

/// A registered function: general evaluator plus its prime-power description.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub name: BuiltinName,
    pub k: u32,
    pub fn2: Fn2,
    pub spec: Option<PrimePowerSpec>,
}

impl Builtin {
    pub fn label(&self) -> String {
        if self.name.takes_k() {
            format!("{}({})", self.name, self.k)
        } else {
            self.name.to_string()
        }
    }
}

/// One-variable tables backing the direct evaluators on `1..=bound`.
#[derive(Debug)]
struct Tables {
    phi: Vec<i64>,
    sigma: Vec<i64>,
    mu: Vec<i8>,
    omega: Vec<u8>,
}

/// Constructs builtins whose direct evaluators are total on `1..=bound` in each coordinate.
#[derive(Debug, Clone)]
pub struct Registry {
    sieve: Arc<FactorSieve>,
    tables: Arc<Tables>,
}

impl Registry {
    pub fn new(bound: u64) -> Result<Registry> {
        let sieve = build_sieve(bound)?;
        let n = sieve.bound() as usize;
        let mut tables = Tables {
            phi: vec![0; n + 1],
            sigma: vec![0; n + 1],
            mu: vec![0; n + 1],
            omega: vec![0; n + 1],
        };
        for m in 1..=n {
            let f = sieve.factorize(m as u64)?;
            tables.phi[m] = onevar::phi(&f);
            tables.sigma[m] = onevar::sigma(&f);
            tables.mu[m] = onevar::mobius(&f) as i8;
            tables.omega[m] = onevar::omega(&f) as u8;
        }
        Ok(Registry {
            sieve: Arc::new(sieve),
            tables: Arc::new(tables),
        })
    }

    pub fn bound(&self) -> u64 {
        self.sieve.bound()
    }

    pub fn sieve(&self) -> &Arc<FactorSieve> {
        &self.sieve
    }

    pub fn get(&self, s: &str, default_k: u32) -> Result<Builtin> {
        let (name, k) = parse_builtin(s, default_k)?;
        Ok(self.builtin(name, k))
    }

    pub fn builtin(&self, name: BuiltinName, k: u32) -> Builtin {
        assert!(k >= 1, "k must be positive");
        Builtin {
            name,
            k,
            fn2: self.direct(name, k),
            spec: Some(local_spec(name, k)),
        }
    }

    fn direct(&self, name: BuiltinName, k: u32) -> Fn2 {
        let t = self.tables.clone();
        let label = if name.takes_k() {
            format!("{name}({k})")
        } else {
            name.to_string()
        };
        let int = |v: i64| Value::Int(v as i128);
        let shape = |outer, inner, conv_one| GcdShape { outer, inner, conv_one };
        match name {
            BuiltinName::One => {
                Fn2::new(label, |_, _| Value::ONE).with_shape(shape(OneVar::One, OneVar::One, false))
            }
            BuiltinName::Delta => {
                Fn2::new(label, |a, b| Value::Int(i128::from(a == 1 && b == 1)))
            }
            BuiltinName::Gcd => Fn2::new(label, |a, b| Value::Int(gcd(a, b) as i128))
                .with_shape(shape(OneVar::One, OneVar::Id, false)),
            BuiltinName::Lcm => Fn2::new(label, |a, b| Value::Int(lcm(a, b) as i128)),
            BuiltinName::SigmaGcd => {
                Fn2::new(label, move |a, b| int(t.sigma[gcd(a, b) as usize]))
                    .with_shape(shape(OneVar::One, OneVar::Sigma, false))
            }
            BuiltinName::PhiGcd => Fn2::new(label, move |a, b| int(t.phi[gcd(a, b) as usize]))
                .with_shape(shape(OneVar::One, OneVar::Phi, false)),
            BuiltinName::KOmega => Fn2::new(label, move |a, b| {
                // distinct primes of a·b
                let w = t.omega[a as usize] + t.omega[b as usize] - t.omega[gcd(a, b) as usize];
                Value::Int((k as i128).pow(w as u32))
            }),
            BuiltinName::AbsRamanujan => Fn2::new(label, move |q, n| {
                let r = q / gcd(q, n);
                if t.mu[r as usize] == 0 {
                    return Value::ZERO;
                }
                let (num, den) = (t.phi[q as usize], t.phi[r as usize]);
                debug_assert_eq!(num % den, 0);
                int(num / den)
            }),
            BuiltinName::F1 => Fn2::new(label, move |a, b| {
                let g = gcd(a, b);
                int(g as i64 * i64::from(t.mu[g as usize]).abs())
            })
            .with_shape(shape(OneVar::One, OneVar::SquarefreeId, false)),
            BuiltinName::F2 => Fn2::new(label, move |a, b| {
                // lcm(a,b) is squarefree iff both a and b are
                let sq = t.mu[a as usize] != 0 && t.mu[b as usize] != 0;
                Value::Int(if sq { gcd(a, b) as i128 } else { 0 })
            }),
            BuiltinName::PhiRatio => Fn2::new(label, move |a, b| {
                Value::Real(phi_ratio_direct(&t, a, b))
            })
            .with_shape(shape(OneVar::PhiOverId, OneVar::Id, false)),
            BuiltinName::S => Fn2::new(label, |a, b| {
                divisor_pair_sum(a, b, |d1, d2| Value::Int(gcd(d1, d2) as i128))
            })
            .with_shape(shape(OneVar::One, OneVar::Id, true)),
            BuiltinName::C => Fn2::new(label, move |a, b| {
                divisor_pair_sum(a, b, |d1, d2| int(t.phi[gcd(d1, d2) as usize]))
            })
            .with_shape(shape(OneVar::One, OneVar::Phi, true)),
            BuiltinName::A => Fn2::new(label, move |a, b| {
                divisor_pair_sum(a, b, |d1, d2| Value::Real(phi_ratio_direct(&t, d1, d2)))
            })
            .with_shape(shape(OneVar::PhiOverId, OneVar::Id, true)),
            BuiltinName::TauK
            | BuiltinName::MuK
            | BuiltinName::TildeTauK
            | BuiltinName::TildeMuK
            | BuiltinName::TildeMu => {
                let f = local_spec(name, k).to_fn2(self.sieve.clone());
                match (name, k) {
                    (BuiltinName::TauK, 2) => f.with_shape(shape(OneVar::One, OneVar::One, true)),
                    (BuiltinName::TildeTauK, 1) => f.with_shape(shape(OneVar::One, OneVar::Id, false)),
                    (BuiltinName::TildeTauK, 2) => f.with_shape(shape(OneVar::One, OneVar::Id, true)),
                    _ => f,
                }
            }
        }
    }
    /// The k-families built from their definitions (iterated convolution and
    /// lattice inversion, evaluated per point). Slow; used as an oracle.
    pub fn lattice(&self, name: BuiltinName, k: u32) -> Option<Fn2> {
        let label = format!("{name}({k})");
        let f = match name {
            BuiltinName::TauK => {
                let one = Fn2::new("one", |_, _| Value::ONE);
                if k == 1 {
                    return Some(Fn2::new(label, |_, _| Value::ONE));
                }
                Fn2::convolution_of(label, vec![one; k as usize])
            }
            BuiltinName::MuK => {
                Fn2::inverse_of(label, self.lattice(BuiltinName::TauK, k)?)
            }
            BuiltinName::TildeTauK => {
                let gcd_f = self.direct(BuiltinName::Gcd, 1);
                if k == 1 {
                    return Some(gcd_f);
                }
                let mut factors = vec![Fn2::new("one", |_, _| Value::ONE); k as usize - 1];
                factors.push(gcd_f);
                Fn2::convolution_of(label, factors)
            }
            BuiltinName::TildeMuK => {
                Fn2::inverse_of(label, self.lattice(BuiltinName::TildeTauK, k)?)
            }
            BuiltinName::TildeMu => Fn2::inverse_of(label, self.direct(BuiltinName::Gcd, 1)),
            _ => return None,
        };
        Some(f)
    }
}

fn phi_ratio_direct(t: &Tables, a: u64, b: u64) -> f64 {
    let num = t.phi[a as usize] as i128 * t.phi[b as usize] as i128;
    num as f64 / lcm(a, b) as f64
}

fn divisor_pair_sum(a: u64, b: u64, f: impl Fn(u64, u64) -> Value) -> Value {
    let db = divisors(b);
    let mut s = Value::ZERO;
    for d1 in divisors(a) {
        for &d2 in &db {
            s = s.add_or_real(f(d1, d2));
        }
    }
    s
}

/// Σ_{t ≤ min(a,b)} (a+b−2t+1)·g(t): sums `g(min(i,j))` over `0≤i≤a, 0≤j≤b`.
fn min_weighted_sum(a: u32, b: u32, from: u32, g: impl Fn(u32) -> Value) -> Value {
    let mut s = Value::ZERO;
    for t in from..=a.min(b) {
        let count = Value::Int((a + b - 2 * t + 1) as i128);
        s = s.add_or_real(count.mul_or_real(g(t)));
    }
    s
}

fn phi_pow(p: u64, e: u32) -> Value {
    if e == 0 {
        Value::ONE
    } else {
        pow_value(p, e - 1).mul_or_real(Value::Int(p as i128 - 1))
    }
}

fn sigma_pow(p: u64, e: u32) -> Value {
    match (p as i128).checked_pow(e + 1) {
        Some(v) => Value::Int((v - 1) / (p as i128 - 1)),
        None => {
            let pf = p as f64;
            Value::Real((pf.powi(e as i32 + 1) - 1.0) / (pf - 1.0))
        }
    }
}

/// Prime-power description of a builtin: `h(p, a, b) = f(p^a, p^b)`.
pub fn local_spec(name: BuiltinName, k: u32) -> PrimePowerSpec {
    let label = if name.takes_k() {
        format!("{name}({k})")
    } else {
        name.to_string()
    };
    match name {
        BuiltinName::One => PrimePowerSpec::new(label, |_, _, _| Value::ONE),
        BuiltinName::Delta => PrimePowerSpec::new(label, |_, a, b| {
            Value::Int(i128::from(a == 0 && b == 0))
        }),
        BuiltinName::Gcd => PrimePowerSpec::new(label, |p, a, b| pow_value(p, a.min(b))),
        BuiltinName::Lcm => PrimePowerSpec::new(label, |p, a, b| pow_value(p, a.max(b))),
        BuiltinName::SigmaGcd => PrimePowerSpec::new(label, |p, a, b| sigma_pow(p, a.min(b))),
        BuiltinName::PhiGcd => PrimePowerSpec::new(label, |p, a, b| phi_pow(p, a.min(b))),
        BuiltinName::KOmega => PrimePowerSpec::new(label, move |_, a, b| {
            Value::Int(if a + b == 0 { 1 } else { k as i128 })
        }),
        // first coordinate is the modulus q
        BuiltinName::AbsRamanujan => PrimePowerSpec::new(label, |p, a, b| {
            if a == 0 {
                Value::ONE
            } else if a <= b {
                phi_pow(p, a)
            } else if a == b + 1 {
                pow_value(p, b)
            } else {
                Value::ZERO
            }
        }),
        BuiltinName::F1 => PrimePowerSpec::new(label, |p, a, b| match a.min(b) {
            0 => Value::ONE,
            1 => Value::Int(p as i128),
            _ => Value::ZERO,
        }),
        BuiltinName::F2 => PrimePowerSpec::new(label, |p, a, b| match (a, b) {
            (1, 1) => Value::Int(p as i128),
            (0 | 1, 0 | 1) => Value::ONE,
            _ => Value::ZERO,
        }),
        BuiltinName::PhiRatio => PrimePowerSpec::new(label, |p, a, b| {
            Value::Real(phi_ratio_local(p, a, b))
        }),
        BuiltinName::S => {
            PrimePowerSpec::new(label, |p, a, b| min_weighted_sum(a, b, 0, |t| pow_value(p, t)))
        }
        BuiltinName::C => {
            PrimePowerSpec::new(label, |p, a, b| min_weighted_sum(a, b, 0, |t| phi_pow(p, t)))
        }
        BuiltinName::A => PrimePowerSpec::new(label, |p, a, b| {
            let q = 1.0 - 1.0 / p as f64;
            let both = min_weighted_sum(a, b, 1, |t| pow_value(p, t)).as_f64();
            Value::Real(1.0 + (a + b) as f64 * q + q * q * both)
        }),
        BuiltinName::TauK => PrimePowerSpec::new(label, move |p, a, b| {
            closed::tau_k_local(k, p, a, b)
                .map(Value::Int)
                .unwrap_or_else(|_| Value::Real(closed::tau_k_local_f64(k, a, b)))
        }),
        BuiltinName::MuK => {
            PrimePowerSpec::new(label, move |p, a, b| Value::Int(closed::mu_k_local(k, p, a, b)))
        }
        BuiltinName::TildeTauK => PrimePowerSpec::new(label, move |p, a, b| {
            closed::tilde_tau_k_local(k, p, a, b)
                .map(Value::Int)
                .unwrap_or_else(|_| Value::Real(closed::tilde_tau_k_local_f64(k, p, a, b)))
        }),
        BuiltinName::TildeMuK => PrimePowerSpec::new(label, move |p, a, b| {
            Value::Int(closed::tilde_mu_k_local(k, p, a, b))
        }),
        BuiltinName::TildeMu => {
            PrimePowerSpec::new(label, |p, a, b| Value::Int(closed::tilde_mu_local(p, a, b)))
        }
    }
}

fn phi_ratio_local(p: u64, a: u32, b: u32) -> f64 {
    let q = 1.0 - 1.0 / p as f64;
    match (a, b) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => q,
        _ => q * q * (p as f64).powi(a.min(b) as i32),
    }
}
