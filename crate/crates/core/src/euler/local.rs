use serde::Serialize;

use crate::arith::PrimePowerSpec;
use crate::error::{Error, Result};
use crate::summation::Compensated;

/// Shells `ν₁+ν₂ = m` summed before any stopping test at `p = 2`.
pub const SHELL_FLOOR_TWO: u32 = 32;
/// Same for odd primes.
pub const SHELL_FLOOR_ODD: u32 = 4;
/// Largest shell index tried before reporting non-convergence.
pub const SHELL_CAP: u32 = 512;
/// The tail estimate must fall below `eps` times this before stopping.
const TAIL_SAFETY: f64 = 1.0 / 64.0;

/// Truncated local sum `Σ_{ν₁,ν₂ ≥ 0} f(p^ν₁, p^ν₂)/p^{ν₁+ν₂}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalFactorResult {
    pub p: u64,
    pub value: f64,
    /// `value − 1`, accumulated separately so logarithms keep full precision.
    pub excess: f64,
    /// Geometric estimate of the neglected shells.
    pub tail_bound: f64,
    /// Largest shell index included.
    pub numax_used: u32,
}

/// Sums diagonal shells until the last one is below `eps`, pairs of
/// consecutive shells are no longer growing and the geometric tail estimate is
/// comfortably below `eps`.
pub fn local_factor(spec: &PrimePowerSpec, p: u64, eps: f64) -> Result<LocalFactorResult> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("eps must be positive (got {eps})")));
    }
    let floor = if p == 2 { SHELL_FLOOR_TWO } else { SHELL_FLOOR_ODD };
    let mut excess = Compensated::new();
    // |shell| for the previous three indices, most recent first
    let mut last = [f64::INFINITY; 3];
    for m in 1..=SHELL_CAP {
        let shell: Compensated = (0..=m).map(|a| spec.weighted(p, a, m - a)).collect();
        let shell = shell.value();
        if !shell.is_finite() {
            return Err(Error::NonConvergence { p, shells: m });
        }
        excess.add(shell);
        let cur = shell.abs();
        // shells alternate with the parity of m, so compare consecutive pairs
        let pair = cur + last[0];
        let prev_pair = last[1] + last[2];
        if m >= floor && cur < eps && pair <= prev_pair {
            let tail = if pair == 0.0 {
                0.0
            } else {
                let r = pair / prev_pair;
                pair * r / (1.0 - r)
            };
            if tail < eps * TAIL_SAFETY {
                let e = excess.value();
                return Ok(LocalFactorResult {
                    p,
                    value: 1.0 + e,
                    excess: e,
                    tail_bound: tail,
                    numax_used: m,
                });
            }
        }
        last = [cur, last[0], last[1]];
    }
    Err(Error::NonConvergence { p, shells: SHELL_CAP })
}

/// Weights multiplying each local factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    /// No weight.
    Unit,
    /// `(1 − 1/p)^{2k}`
    Th3i,
    /// `(1 − 1/p)^{2k+1}`
    Th3ii,
}

impl Weight {
    pub fn exponent(self, k: u32) -> u32 {
        match self {
            Weight::Unit => 0,
            Weight::Th3i => 2 * k,
            Weight::Th3ii => 2 * k + 1,
        }
    }

    /// `exponent · log(1 − 1/p)`.
    pub fn log_weight(self, p: u64, k: u32) -> f64 {
        self.exponent(k) as f64 * (-1.0 / p as f64).ln_1p()
    }
}

/// The weight times the local factor.
pub fn weighted_local_factor(spec: &PrimePowerSpec, p: u64, k: u32, weight: Weight, eps: f64) -> Result<f64> {
    let l = local_factor(spec, p, eps)?;
    Ok((1.0 - 1.0 / p as f64).powi(weight.exponent(k) as i32) * l.value)
}
