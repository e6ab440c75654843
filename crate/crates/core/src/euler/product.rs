use rayon::prelude::*;
use serde::Serialize;

use super::local::{local_factor, Weight};
use crate::arith::{build_sieve, Fn2, PrimePowerSpec};
use crate::error::{Error, Result};
use crate::summation::partial::{blocked_sum, floor_bound};
use crate::summation::{Compensated, SumConfig};
use crate::value::Value;

/// Behaviour of the truncated product as `pmax` grows, judged from the last
/// prime's log-contribution `ℓ(p)`: a product behaving like `∏(1 + c/p)` does
/// not converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Convergent,
    DivergesToZero,
    DivergesToInfinity,
}

/// `p·|ℓ(p)|` above this marks a `1/p`-sized local correction.
const DIVERGENCE_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductResult {
    /// Raw truncated product over `p ≤ pmax`.
    pub value: f64,
    pub pmax: u64,
    pub primes: usize,
    /// `|log|` of the last prime's weighted factor.
    pub per_prime_tail: f64,
    /// Largest local truncation estimate over all primes.
    pub max_local_tail: f64,
    /// Product with the prime-zeta tail estimate applied, when the product converges.
    pub extrapolated: Option<f64>,
    pub trend: Trend,
    pub truncation_note: String,
}

/// `∏_{p ≤ pmax} (1 − 1/p)^e · L_f(p)`, accumulated in log space in ascending
/// prime order. Local truncation errors share a sign, so each prime gets an
/// equal share of `eps`.
pub fn global_product(spec: &PrimePowerSpec, k: u32, weight: Weight, pmax: u64, eps: f64) -> Result<ProductResult> {
    if pmax < 2 {
        return Err(Error::Domain(format!("pmax must be at least 2 (got {pmax})")));
    }
    let sieve = build_sieve(pmax)?;
    let primes = sieve.primes_up_to(pmax);
    let local_eps = eps / primes.len() as f64;
    let logs: Vec<(f64, f64)> = primes
        .par_iter()
        .map(|&p| {
            let p = p as u64;
            let l = local_factor(spec, p, local_eps)?;
            if l.value.is_nan() || l.value <= 0.0 {
                return Err(Error::NonPositiveFactor { p, value: l.value });
            }
            Ok((weight.log_weight(p, k) + l.excess.ln_1p(), l.tail_bound))
        })
        .collect::<Result<_>>()?;

    let mut total = Compensated::new();
    let mut max_local_tail = 0f64;
    for &(lg, tail) in &logs {
        total.add(lg);
        max_local_tail = max_local_tail.max(tail);
    }
    let value = total.value().exp();
    let last_p = *primes.last().expect("pmax ≥ 2 has a prime") as f64;
    let last_log = logs.last().map_or(0.0, |t| t.0);
    let per_prime_tail = last_log.abs();

    let (trend, extrapolated, truncation_note) = if last_p * per_prime_tail > DIVERGENCE_THRESHOLD {
        let trend = if last_log < 0.0 { Trend::DivergesToZero } else { Trend::DivergesToInfinity };
        let note = format!(
            "local corrections of size {per_prime_tail:.3e} at p={last_p} decay like 1/p; the product does not converge"
        );
        (trend, None, note)
    } else {
        // ℓ(p) ≈ c/p² and Σ_{p > P} 1/p² ≈ 1/(P log P)
        let c = last_log * last_p * last_p;
        let tail = c / (last_p * last_p.ln());
        let note = format!(
            "truncated at pmax={pmax}; estimated log tail {tail:.3e} from c/p² with c={c:.4}"
        );
        (Trend::Convergent, Some(value * tail.exp()), note)
    };
    Ok(ProductResult {
        value,
        pmax,
        primes: primes.len(),
        per_prime_tail,
        max_local_tail,
        extrapolated,
        trend,
        truncation_note,
    })
}

/// `Σ_{n₁,n₂ ≤ N} g(n₁,n₂)/(n₁n₂)`.
pub fn series_direct(g: &Fn2, n: f64, cfg: &SumConfig) -> Result<f64> {
    let n = floor_bound(n)?;
    let points = n as u128 * n as u128;
    if points > cfg.point_budget as u128 {
        return Err(Error::BudgetExceeded { points, budget: cfg.point_budget });
    }
    let v = blocked_sum(n, cfg.blocks, |n1, acc| {
        for n2 in 1..=n {
            let v = g.eval(n1, n2);
            if !v.is_zero() {
                acc.add(Value::Real(v.as_f64() / (n1 as f64 * n2 as f64)));
            }
        }
    });
    Ok(v.as_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{local_spec, BuiltinName as B, Registry};
    use crate::euler::constants::ZETA2;

    const EPS: f64 = 1e-12;

    #[test]
    fn sigma_gcd_product_is_one() {
        for pmax in [2u64, 100, 10_000] {
            let r = global_product(&local_spec(B::SigmaGcd, 1), 1, Weight::Th3ii, pmax, EPS).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12, "{pmax}: {}", r.value);
            assert_eq!(r.trend, Trend::Convergent);
        }
    }

    #[test]
    fn phi_gcd_product_tends_to_inverse_zeta2_squared() {
        let r = global_product(&local_spec(B::PhiGcd, 1), 1, Weight::Th3ii, 100_000, EPS).unwrap();
        let want = 1.0 / (ZETA2 * ZETA2);
        assert!((r.value - want).abs() < 1e-5);
        let ex = r.extrapolated.unwrap();
        assert!((ex - want).abs() < (r.value - want).abs());
    }

    #[test]
    fn truncation_is_monotone_within_heuristic() {
        let spec = local_spec(B::AbsRamanujan, 1);
        let a = global_product(&spec, 1, Weight::Th3ii, 10_000, EPS).unwrap();
        let b = global_product(&spec, 1, Weight::Th3ii, 100_000, EPS).unwrap();
        let ratio = b.primes as f64 / a.primes as f64;
        assert!((a.value - b.value).abs() < a.per_prime_tail * a.primes as f64 * ratio);
    }

    #[test]
    fn delta_under_weight_diverges_to_zero() {
        let r = global_product(&local_spec(B::Delta, 1), 1, Weight::Th3ii, 10_000, EPS).unwrap();
        assert_eq!(r.trend, Trend::DivergesToZero);
        assert!(r.extrapolated.is_none());
    }

    #[test]
    fn series_examples() {
        let reg = Registry::new(200).unwrap();
        let cfg = SumConfig::default();
        let d = series_direct(&reg.builtin(B::Delta, 1).fn2, 50.0, &cfg).unwrap();
        assert_eq!(d, 1.0);
        // both truncations of Σ 1/(n₁n₂)² = ζ(2)²
        let g = Fn2::new("inv", |a, b| Value::Real(1.0 / (a * b) as f64));
        let spec = PrimePowerSpec::new("inv", |p, a, b| Value::Real((p as f64).powi(-((a + b) as i32))));
        let s = series_direct(&g, 2000.0, &cfg).unwrap();
        let prod = global_product(&spec, 1, Weight::Unit, 2000, EPS).unwrap();
        let z = ZETA2 * ZETA2;
        assert!((s - z).abs() < 3e-3 && (prod.value - z).abs() < 3e-3, "{s} {}", prod.value);
        // μ̃ has no absolutely convergent series; both truncations are small
        let tm = reg.builtin(B::TildeMu, 1).fn2;
        assert!(series_direct(&tm, 200.0, &cfg).unwrap().abs() < 0.1);
        let tmp = global_product(&local_spec(B::TildeMu, 1), 1, Weight::Unit, 10_000, EPS).unwrap();
        assert_eq!(tmp.trend, Trend::DivergesToZero);
        let mu1 = reg.builtin(B::MuK, 1).fn2;
        assert!(series_direct(&mu1, 200.0, &cfg).unwrap().abs() < 0.05);
    }
}
