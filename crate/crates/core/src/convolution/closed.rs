//! Closed forms at prime-power coordinates `(p^a, p^b)`.

use crate::error::{Error, Result};

const PASCAL_ROWS: usize = 129;

fn pascal() -> &'static [[i128; PASCAL_ROWS]; PASCAL_ROWS] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Box<[[i128; PASCAL_ROWS]; PASCAL_ROWS]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0i128; PASCAL_ROWS]; PASCAL_ROWS]);
        for n in 0..PASCAL_ROWS {
            t[n][0] = 1;
            for r in 1..=n {
                t[n][r] = t[n - 1][r - 1] + t[n - 1][r];
            }
        }
        t
    })
}

/// Exact `C(n, r)` by Pascal's rule for `n ≤ 128`, by the product formula beyond.
pub fn binomial(n: u64, r: u64) -> Option<i128> {
    if r > n {
        return Some(0);
    }
    if (n as usize) < PASCAL_ROWS {
        return Some(pascal()[n as usize][r as usize]);
    }
    let r = r.min(n - r);
    let mut acc: i128 = 1;
    for i in 1..=r as i128 {
        // acc·(n−r+i) is divisible by i after the previous steps
        acc = acc.checked_mul(n as i128 - r as i128 + i)? / i;
    }
    Some(acc)
}

fn binomial_f64(n: u64, r: u64) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    (1..=r).fold(1.0, |acc, i| acc * (n - r + i) as f64 / i as f64)
}

fn sign(e: u32) -> i128 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `μ_k(p^a, p^b) = (−1)^{a+b} C(k,a) C(k,b)` for `a, b ≤ k`, else 0. Independent of `p`.
pub fn mu_k_local(k: u32, _p: u64, a: u32, b: u32) -> i128 {
    if a > k || b > k {
        return 0;
    }
    let c = |v: u32| binomial(k as u64, v as u64).expect("k ≤ 128");
    sign(a + b) * c(a) * c(b)
}

/// Dirichlet inverse of gcd at `(p^a, p^b)`.
pub fn tilde_mu_local(p: u64, a: u32, b: u32) -> i128 {
    let p = p as i128;
    match (a, b) {
        (0, 0) => 1,
        _ if a + b == 1 => -1,
        (1, 1) => 2 - p,
        _ if a.abs_diff(b) == 1 => p - 1,
        _ if a == b => 2 - 2 * p,
        _ => 0,
    }
}

/// `μ̃_k = μ_{k−1} ∗ μ̃` for `k ≥ 2`, by local convolution; `μ̃₁ = μ̃`.
///
/// Exact for `k ≤ 32` and word-sized primes.
pub fn tilde_mu_k_local(k: u32, p: u64, a: u32, b: u32) -> i128 {
    assert!(k >= 1, "k must be positive");
    if k == 1 {
        return tilde_mu_local(p, a, b);
    }
    let mut s = 0i128;
    for i in 0..=a.min(k - 1) {
        for j in 0..=b.min(k - 1) {
            s += mu_k_local(k - 1, p, i, j) * tilde_mu_local(p, a - i, b - j);
        }
    }
    s
}

/// `τ_k(p^a, p^b) = C(a+k−1, k−1)·C(b+k−1, k−1)`.
pub fn tau_k_local(k: u32, _p: u64, a: u32, b: u32) -> Result<i128> {
    assert!(k >= 1, "k must be positive");
    let c = |v: u32| binomial((v + k - 1) as u64, (k - 1) as u64);
    c(a).zip(c(b))
        .and_then(|(x, y)| x.checked_mul(y))
        .ok_or(Error::Overflow("evaluating tau_k"))
}

pub(crate) fn tau_k_local_f64(k: u32, a: u32, b: u32) -> f64 {
    binomial_f64((a + k - 1) as u64, (k - 1) as u64) * binomial_f64((b + k - 1) as u64, (k - 1) as u64)
}

/// `τ̃_k = 𝟙^{∗(k−1)} ∗ gcd` at `(p^a, p^b)`; `τ̃₁ = gcd`.
pub fn tilde_tau_k_local(k: u32, p: u64, a: u32, b: u32) -> Result<i128> {
    assert!(k >= 1, "k must be positive");
    let overflow = || Error::Overflow("evaluating tilde_tau_k");
    let pw = |e: u32| (p as i128).checked_pow(e).ok_or_else(overflow);
    if k == 1 {
        return pw(a.min(b));
    }
    let mut s: i128 = 0;
    for i in 0..=a {
        for j in 0..=b {
            let t = tau_k_local(k - 1, p, i, j)?
                .checked_mul(pw((a - i).min(b - j))?)
                .ok_or_else(overflow)?;
            s = s.checked_add(t).ok_or_else(overflow)?;
        }
    }
    Ok(s)
}

pub(crate) fn tilde_tau_k_local_f64(k: u32, p: u64, a: u32, b: u32) -> f64 {
    let pf = p as f64;
    if k == 1 {
        return pf.powi(a.min(b) as i32);
    }
    let mut s = 0.0;
    for i in 0..=a {
        for j in 0..=b {
            s += tau_k_local_f64(k - 1, i, j) * pf.powi((a - i).min(b - j) as i32);
        }
    }
    s
}
