//! The two-variable Dirichlet convolution ring: pointwise, local and tabulated.

pub mod closed;
pub mod dense;
pub mod local;
pub mod ring;

pub use closed::{mu_k_local, tau_k_local, tilde_mu_k_local, tilde_mu_local, tilde_tau_k_local};
pub use dense::{convolve_tables, invert_integer_table, inverse_table, DenseTable2, InverseTable};
pub use local::{convolve_local, convolve_local_tables, inverse_local, LocalTable, DEFAULT_NUMAX};
pub use ring::Scalar;

use crate::arith::onevar::divisors;
use crate::arith::Fn2;
use crate::error::{Error, Result};
use crate::value::Value;

/// `(f∗g)(n₁,n₂) = Σ_{d₁|n₁, d₂|n₂} f(d₁,d₂)·g(n₁/d₁, n₂/d₂)`.
pub fn convolve(f: &Fn2, g: &Fn2, n1: u64, n2: u64) -> Result<Value> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Domain("arguments must be positive".into()));
    }
    let d2s = divisors(n2);
    let mut s = Value::ZERO;
    for d1 in divisors(n1) {
        for &d2 in &d2s {
            let t = f
                .eval(d1, d2)
                .checked_mul(g.eval(n1 / d1, n2 / d2))
                .ok_or(Error::Overflow("convolution"))?;
            s = s.checked_add(t).ok_or(Error::Overflow("convolution"))?;
        }
    }
    Ok(s)
}
