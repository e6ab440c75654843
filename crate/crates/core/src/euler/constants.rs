use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const ZETA2: f64 = PI * PI / 6.0;

/// Numerical constants shared by the limit formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub euler_gamma: f64,
    pub zeta2: f64,
    pub zeta2_prime: f64,
}

impl Constants {
    pub fn get() -> &'static Constants {
        static C: OnceLock<Constants> = OnceLock::new();
        C.get_or_init(|| Constants {
            euler_gamma: EULER_GAMMA,
            zeta2: ZETA2,
            zeta2_prime: zeta2_prime_euler_maclaurin(20, 8),
        })
    }
}

/// `ζ'(2) = −Σ log n / n²`.
pub fn zeta2_prime() -> f64 {
    Constants::get().zeta2_prime
}

/// `B_2, B_4, …, B_16`.
const BERNOULLI_EVEN: [(i64, i64); 8] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
];

/// Euler–Maclaurin evaluation of `−Σ log n/n²`: the first `n - 1` terms
/// directly, then integral, midpoint and `terms` Bernoulli corrections at `n`.
pub(crate) fn zeta2_prime_euler_maclaurin(n: u32, terms: usize) -> f64 {
    let f = |x: f64| x.ln() / (x * x);
    let mut s: f64 = (2..n).map(|m| f(m as f64)).sum();
    let x = n as f64;
    s += (x.ln() + 1.0) / x + f(x) / 2.0;
    // f^{(j)}(x) = x^{−2−j}(a_j log x + b_j)
    let (mut a, mut b) = (1.0f64, 0.0f64);
    let mut fact = 1.0f64;
    for j in 0..(2 * terms) {
        let jf = j as f64;
        let (na, nb) = (-(2.0 + jf) * a, -(2.0 + jf) * b + a);
        a = na;
        b = nb;
        fact *= (j + 1) as f64;
        // derivative of odd order 2i−1 = j+1
        if (j + 1) % 2 == 1 {
            let i = (j + 2) / 2;
            if i > terms {
                break;
            }
            let (bn, bd) = BERNOULLI_EVEN[i - 1];
            let deriv = x.powi(-(3 + j as i32)) * (a * x.ln() + b);
            s -= bn as f64 / bd as f64 / (fact * (j as f64 + 2.0)) * deriv;
        }
    }
    -s
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `C_k = 1/((k−1)!)²`.
pub fn c_k_rational(k: u32) -> BigRational {
    assert!(k >= 1, "k must be positive");
    let f = factorial(k - 1);
    BigRational::new(BigInt::one(), &f * &f)
}

/// `C̃'_k = 1/(((k−1)!)²(2k−1))`.
pub fn tilde_c_k_prime_rational(k: u32) -> BigRational {
    c_k_rational(k) / BigRational::from_integer(BigInt::from(2 * k - 1))
}

pub fn c_k(k: u32) -> f64 {
    c_k_rational(k).to_f64().expect("finite")
}

pub fn tilde_c_k_prime(k: u32) -> f64 {
    tilde_c_k_prime_rational(k).to_f64().expect("finite")
}

/// `C̃_k = C̃'_k / ζ(2)`.
pub fn tilde_c_k(k: u32) -> f64 {
    tilde_c_k_prime(k) / ZETA2
}
