use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::compensated::{compensated_sum, Compensated};
use super::partial::{partial_sum, SumConfig, SumResult};
use crate::arith::Fn2;
use crate::error::{Error, Result};

/// Normalizations of the box sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `x·y·log(x ∧ y)`
    Th1,
    /// `x·y·(log x · log y)^{k−1}`
    Th2i,
    /// `x²·(log x)^{2k−1}` over the square box; `y` is ignored.
    Th2ii,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Th1, Variant::Th2i, Variant::Th2ii];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Th1 => "th1",
            Variant::Th2i => "th2i",
            Variant::Th2ii => "th2ii",
        }
    }

    /// The normalizing denominator; requires every logarithm to be positive.
    pub fn denominator(self, k: u32, x: f64, y: f64) -> Result<f64> {
        if k == 0 {
            return Err(Error::Domain("k must be positive".into()));
        }
        let e = std::f64::consts::E;
        let y = if self == Variant::Th2ii { x } else { y };
        if !(x > e && y > e) {
            return Err(Error::Domain(format!("normalization needs x, y > e (got x={x}, y={y})")));
        }
        Ok(match self {
            Variant::Th1 => x * y * x.min(y).ln(),
            Variant::Th2i => x * y * (x.ln() * y.ln()).powi(k as i32 - 1),
            Variant::Th2ii => x * x * x.ln().powi(2 * k as i32 - 1),
        })
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::UnknownName {
                name: s.to_string(),
                valid: "th1, th2i, th2ii".into(),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMean {
    pub variant: Variant,
    pub k: u32,
    pub x: f64,
    pub y: f64,
    pub normalized: f64,
    pub sum: SumResult,
}

impl NormalizedMean {
    /// Normalizes an already computed box sum.
    pub fn from_sum(sum: SumResult, variant: Variant, k: u32) -> Result<NormalizedMean> {
        let den = variant.denominator(k, sum.x, sum.y)?;
        Ok(NormalizedMean {
            variant,
            k,
            x: sum.x,
            y: sum.y,
            normalized: sum.value.as_f64() / den,
            sum,
        })
    }
}

/// The box sum of `f` divided by the variant's normalization.
pub fn normalized_mean(
    f: &Fn2,
    variant: Variant,
    k: u32,
    x: f64,
    y: f64,
    cfg: &SumConfig,
) -> Result<NormalizedMean> {
    let y = if variant == Variant::Th2ii { x } else { y };
    variant.denominator(k, x, y)?;
    NormalizedMean::from_sum(partial_sum(f, x, y, cfg)?, variant, k)
}

#[inline]
fn log_pow(n: u64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        (n as f64).ln().powf(alpha)
    }
}

/// `Σ_{n ≤ x} (log n)^α / n`.
pub fn lemma1_sum(alpha: f64, x: f64) -> f64 {
    let n = x.floor().max(0.0) as u64;
    compensated_sum((1..=n).map(|m| log_pow(m, alpha) / m as f64))
}

/// `Σ_{n₁ ≤ x, n₂ ≤ y} log(n₁ ∧ n₂)`, grouped by the value of the minimum.
pub fn lemma4_sum(x: f64, y: f64) -> f64 {
    let (nx, ny) = (x.floor().max(0.0) as u64, y.floor().max(0.0) as u64);
    compensated_sum((1..=nx.min(ny)).map(|m| {
        let count = (nx - m + 1) * (ny - m + 1) - (nx - m) * (ny - m);
        count as f64 * (m as f64).ln()
    }))
}

/// `Σ_{n₁,n₂ ≤ x} log(n₁ ∧ n₂) / (n₁n₂)`, grouped by the value of the minimum.
pub fn lemma5_sum(x: f64) -> f64 {
    let n = x.floor().max(0.0) as usize;
    // tail[m] = Σ_{m < j ≤ n} 1/j
    let mut tail = vec![0.0; n + 1];
    let mut acc = Compensated::new();
    for j in (1..n).rev() {
        acc.add(1.0 / (j + 1) as f64);
        tail[j] = acc.value();
    }
    compensated_sum((1..=n).map(|m| {
        let mf = m as f64;
        mf.ln() / mf * (1.0 / mf + 2.0 * tail[m])
    }))
}

/// `Σ_{n₁,n₂ ≤ x} (log n₁)^α (log n₂)^β log(x/n₁ ∧ x/n₂) / (n₁n₂)`, grouped by
/// `max(n₁, n₂)` so the cost is linear in `x`.
pub fn lemma6_sum(alpha: f64, beta: f64, x: f64) -> f64 {
    let n = x.floor().max(0.0) as u64;
    let lx = x.ln();
    let (mut pa, mut pb) = (Compensated::new(), Compensated::new());
    let mut total = Compensated::new();
    for m in 1..=n {
        let mf = m as f64;
        let (la, lb) = (log_pow(m, alpha), log_pow(m, beta));
        // pairs with max = m: (m, j<m), (j<m, m) and (m, m)
        let shell = la * pb.value() + lb * pa.value() + la * lb / mf;
        total.add((lx - mf.ln()) * shell / mf);
        pa.add(la / mf);
        pb.add(lb / mf);
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{BuiltinName, Registry};

    fn brute(x: u64, f: impl Fn(u64, u64) -> f64) -> f64 {
        compensated_sum((1..=x).flat_map(|a| (1..=x).map(move |b| (a, b))).map(|(a, b)| f(a, b)))
    }

    #[test]
    fn lemma_sum_examples() {
        assert_eq!(lemma1_sum(0.0, 1.0), 1.0);
        assert!((lemma4_sum(2.0, 2.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn lemma_sums_match_brute_force() {
        let ln = |n: u64| (n as f64).ln();
        for x in [2u64, 3, 10, 37] {
            let xf = x as f64;
            let l4 = brute(x, |a, b| ln(a.min(b)));
            assert!((lemma4_sum(xf, xf) - l4).abs() < 1e-10);
            let l5 = brute(x, |a, b| ln(a.min(b)) / (a * b) as f64);
            assert!((lemma5_sum(xf) - l5).abs() < 1e-12);
            for (al, be) in [(0.0, 0.0), (1.0, 2.0), (0.5, 0.0)] {
                let l6 = brute(x, |a, b| {
                    let g = |n: u64, e: f64| if e == 0.0 { 1.0 } else { ln(n).powf(e) };
                    g(a, al) * g(b, be) * (xf / a.max(b) as f64).ln() / (a * b) as f64
                });
                assert!((lemma6_sum(al, be, xf) - l6).abs() < 1e-10, "{x} {al} {be}");
            }
        }
        let rect = compensated_sum((1..=9u64).flat_map(|a| (1..=4u64).map(move |b| ln(a.min(b)))));
        assert!((lemma4_sum(9.0, 4.0) - rect).abs() < 1e-12);
    }

    #[test]
    fn lemma1_remainder_stays_bounded() {
        for alpha in [0.0, 1.0, 2.0] {
            let r: Vec<f64> = [1e3, 1e4, 1e5, 1e6]
                .iter()
                .map(|&x| lemma1_sum(alpha, x) - x.ln().powf(alpha + 1.0) / (alpha + 1.0))
                .collect();
            assert!(r.iter().all(|v| v.abs() < 1.0), "{alpha}: {r:?}");
        }
    }

    #[test]
    fn lemma6_ratio_tends_to_one_third() {
        let r = |x: f64| lemma6_sum(0.0, 0.0, x) / x.ln().powi(3);
        let (a, b) = (r(1e3), r(1e6));
        assert!((b - 1.0 / 3.0).abs() < (a - 1.0 / 3.0).abs());
        assert!((b - 1.0 / 3.0).abs() < 0.05);
    }

    #[test]
    fn normalization_domain_and_delta() {
        let reg = Registry::new(1000).unwrap();
        let delta = reg.builtin(BuiltinName::Delta, 1).fn2;
        let cfg = SumConfig::default();
        assert!(normalized_mean(&delta, Variant::Th1, 1, 2.5, 100.0, &cfg).is_err());
        let a = normalized_mean(&delta, Variant::Th1, 1, 100.0, 100.0, &cfg).unwrap();
        assert!((a.normalized - 1.0 / (1e4 * 100f64.ln())).abs() < 1e-18);
        let b = normalized_mean(&delta, Variant::Th2ii, 2, 1000.0, 3.0, &cfg).unwrap();
        assert!(b.normalized < a.normalized);
    }

    #[test]
    fn one_under_th2i_with_k1_is_floor_ratio() {
        let reg = Registry::new(100).unwrap();
        let one = reg.builtin(BuiltinName::One, 1).fn2;
        let m = normalized_mean(&one, Variant::Th2i, 1, 50.5, 20.25, &SumConfig::default()).unwrap();
        assert!((m.normalized - 50.0 * 20.0 / (50.5 * 20.25)).abs() < 1e-15);
    }
}
