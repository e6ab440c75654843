use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::report::Verdict;
use crate::arith::{local_spec, BuiltinName as B, OneVar, Registry};
use crate::convolution::ring::rational;
use crate::convolution::{
    convolve_local_tables, convolve_tables, invert_integer_table, inverse_local, inverse_table,
    mu_k_local, tau_k_local, tilde_mu_k_local, tilde_mu_local, DenseTable2, InverseTable, LocalTable,
};
use crate::error::{Error, Result};
use crate::euler::constants::{c_k_rational, tilde_c_k_prime_rational, zeta2_prime_euler_maclaurin};
use crate::euler::{closed_local_factor, local_factor, tilde_c_k, tilde_c_k_prime, weighted_local_factor, Constants, ExampleId, Weight};
use crate::summation::{
    abel2d_check, abel2d_check_exact, compensated_sum, partial_sum, partial_sum_conv_one, partial_sum_direct,
    partial_sum_gcd_composed, SumConfig,
};
use crate::value::Value;

const LOCAL_PRIMES: [u64; 4] = [2, 3, 5, 7];
const FACTOR_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];
const NUMAX: u32 = 6;
const SEED: u64 = 0x5eed;

/// Verification batteries runnable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Inverse of the k-fold divisor function at prime powers.
    Lemma9,
    /// Inverse of gcd and of its convolutions with 𝟙.
    Lemma10,
    /// The two-variable partial summation identity.
    Lemma7,
    LocalFactors,
    MethodAgreement,
    Constants,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lemma9,
        Suite::Lemma10,
        Suite::Lemma7,
        Suite::LocalFactors,
        Suite::MethodAgreement,
        Suite::Constants,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Lemma9 => "lemma9",
            Suite::Lemma10 => "lemma10",
            Suite::Lemma7 => "lemma7",
            Suite::LocalFactors => "local_factors",
            Suite::MethodAgreement => "method_agreement",
            Suite::Constants => "constants",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.as_str() == s).ok_or_else(|| Error::UnknownSuite {
            name: s.into(),
            valid: Suite::ALL.map(|x| x.as_str()).join(", "),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Verdict>,
    pub passed: usize,
    pub failed: usize,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

/// Collects checks; each records its outcome and a short detail.
#[derive(Default)]
struct Checks(Vec<Verdict>);

impl Checks {
    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.0.push(Verdict { name: name.into(), pass, detail: detail.into() });
    }

    /// Records a failed check for an unexpected error instead of aborting the suite.
    fn attempt(&mut self, name: &str, f: impl FnOnce(&mut Checks) -> Result<()>) {
        if let Err(e) = f(self) {
            self.check(name, false, format!("error: {e}"));
        }
    }
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let start = Instant::now();
    let mut c = Checks::default();
    match suite {
        Suite::Lemma9 => c.attempt("lemma9", lemma9),
        Suite::Lemma10 => c.attempt("lemma10", lemma10),
        Suite::Lemma7 => c.attempt("lemma7", lemma7),
        Suite::LocalFactors => c.attempt("local_factors", local_factors),
        Suite::MethodAgreement => c.attempt("method_agreement", method_agreement),
        Suite::Constants => c.attempt("constants", constants),
    }
    let failed = c.0.iter().filter(|v| !v.pass).count();
    SuiteReport {
        suite,
        passed: c.0.len() - failed,
        failed,
        checks: c.0,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// First exponent pair where a table disagrees with a closed form.
fn first_mismatch(t: &LocalTable<i128>, closed: impl Fn(u32, u32) -> i128) -> Option<(u32, u32, i128, i128)> {
    (0..=t.numax())
        .flat_map(|a| (0..=t.numax()).map(move |b| (a, b)))
        .find_map(|(a, b)| {
            let (got, want) = (*t.get(a, b), closed(a, b));
            (got != want).then_some((a, b, got, want))
        })
}

fn mismatch_detail(m: Option<(u32, u32, i128, i128)>) -> String {
    match m {
        None => "exact".into(),
        Some((a, b, got, want)) => format!("at ({a},{b}): inversion {got}, closed form {want}"),
    }
}

/// `𝟙^{∗k}` at `p`, by repeated local convolution.
fn tau_by_convolution(k: u32, p: u64) -> Result<LocalTable<i128>> {
    let one = LocalTable::from_fn(p, NUMAX, |_, _| 1i128);
    let mut t = one.clone();
    for _ in 1..k {
        t = convolve_local_tables(&t, &one)?;
    }
    Ok(t)
}

fn lemma9(c: &mut Checks) -> Result<()> {
    for k in 1..=4 {
        for p in LOCAL_PRIMES {
            let tau = tau_by_convolution(k, p)?;
            let m = first_mismatch(&tau, |a, b| tau_k_local(k, p, a, b).unwrap_or(i128::MIN));
            c.check(format!("tau_{k} at p={p} matches binomial form"), m.is_none(), mismatch_detail(m));
            let inv = inverse_local(&tau)?;
            let m = first_mismatch(&inv, |a, b| mu_k_local(k, p, a, b));
            c.check(format!("inverse of tau_{k} at p={p}"), m.is_none(), mismatch_detail(m));
        }
    }
    Ok(())
}

fn lemma10(c: &mut Checks) -> Result<()> {
    for p in LOCAL_PRIMES {
        let gcd = LocalTable::from_fn(p, NUMAX, |a, b| (p as i128).pow(a.min(b)));
        let inv = inverse_local(&gcd)?;
        let m = first_mismatch(&inv, |a, b| tilde_mu_local(p, a, b));
        c.check(format!("inverse of gcd at p={p}"), m.is_none(), mismatch_detail(m));
        for k in 2..=4 {
            let mut t = gcd.clone();
            let one = LocalTable::from_fn(p, NUMAX, |_, _| 1i128);
            for _ in 1..k {
                t = convolve_local_tables(&t, &one)?;
            }
            let m = first_mismatch(&inverse_local(&t)?, |a, b| tilde_mu_k_local(k, p, a, b));
            c.check(format!("inverse of tilde_tau_{k} at p={p}"), m.is_none(), mismatch_detail(m));
        }
    }
    let bound = 60;
    let reg = Registry::new(bound as u64)?;
    let gcd = DenseTable2::from_fn2(&reg.builtin(B::Gcd, 1).fn2, bound)?;
    let tm = DenseTable2::from_fn2(&reg.builtin(B::TildeMu, 1).fn2, bound)?;
    let inv = inverse_table(&gcd)?;
    c.check(
        format!("table inverse of gcd equals the multiplicative closed form on [1,{bound}]²"),
        inv == tm,
        "",
    );
    Ok(())
}

fn lemma7(c: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut exact_bad, mut float_worst) = (Vec::new(), 0f64);
    for i in 0..100 {
        let t = DenseTable2::<i128>::from_fn(20, |_, _| rng.gen_range(-100..=100));
        let pts = [(20.0, 20.0), (rng.gen_range(1..=20) as f64, rng.gen_range(1..=20) as f64 + 0.5)];
        for (x, y) in pts {
            let (l, r): (BigRational, BigRational) = abel2d_check_exact(&t, x, y)?;
            if l != r {
                exact_bad.push(format!("table {i} at ({x},{y})"));
            }
            let (lf, rf) = abel2d_check(&t.map(|&v| v as f64), x, y)?;
            float_worst = float_worst.max((lf - rf).abs());
        }
    }
    c.check("identity exact in rationals on 100 random tables", exact_bad.is_empty(), exact_bad.join("; "));
    c.check("identity within 1e-12 in floating point", float_worst < 1e-12, format!("max |lhs − rhs| = {float_worst:.3e}"));
    let (l, r) = abel2d_check_exact(&DenseTable2::<i128>::delta(8), 5.0, 8.0)?;
    c.check("delta table gives 1 on both sides", l == rational(1) && r == rational(1), "");
    Ok(())
}

fn local_factors(c: &mut Checks) -> Result<()> {
    let cases = [
        (ExampleId::E1, B::KOmega, 2),
        (ExampleId::E1, B::KOmega, 3),
        (ExampleId::E2, B::AbsRamanujan, 1),
        (ExampleId::E3, B::SigmaGcd, 1),
        (ExampleId::E4, B::PhiGcd, 1),
        (ExampleId::E5a, B::F1, 1),
        (ExampleId::E5b, B::F2, 1),
        (ExampleId::E6, B::PhiRatio, 1),
    ];
    let eps = 1e-12;
    for (id, name, k) in cases {
        let spec = local_spec(name, k);
        let mut worst = 0f64;
        for p in FACTOR_PRIMES {
            let closed = closed_local_factor(id, p, k)?;
            let numeric = match closed.weight {
                Weight::Unit => local_factor(&spec, p, eps)?.value,
                w => weighted_local_factor(&spec, p, k, w, eps)?,
            };
            worst = worst.max((numeric - closed.value).abs());
        }
        c.check(
            format!("example {id} (k={k}) local factors at p ≤ 11"),
            worst < 1e-12,
            format!("max deviation {worst:.3e}"),
        );
    }
    let mut worst = 0f64;
    for p in FACTOR_PRIMES {
        let a = local_factor(&local_spec(B::TildeMu, 1), p, eps)?.value;
        let b = local_factor(&local_spec(B::Gcd, 1), p, eps)?.value;
        worst = worst.max((a * b - 1.0).abs());
    }
    c.check("tilde_mu and gcd local factors are reciprocal", worst < 1e-12, format!("max deviation {worst:.3e}"));
    Ok(())
}

fn random_unit_table(rng: &mut ChaCha8Rng, bound: usize) -> DenseTable2<i128> {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    DenseTable2::from_fn(bound, |a, b| if a == 1 && b == 1 { sign } else { rng.gen_range(-3..=3) })
}

fn method_agreement(c: &mut Checks) -> Result<()> {
    let cfg = SumConfig::default();
    let reg = Registry::new(300)?;
    let b = |n, k| reg.builtin(n, k).fn2;

    let mut bad = Vec::new();
    for (inner, name) in [(OneVar::Id, B::Gcd), (OneVar::Sigma, B::SigmaGcd), (OneVar::Phi, B::PhiGcd)] {
        for x in [1.0, 2.0, 17.0, 100.0, 300.0] {
            let fast = partial_sum_gcd_composed(inner, x, &cfg)?.value;
            let slow = partial_sum_direct(&b(name, 1), x, x, &cfg)?.value;
            if fast != slow || !fast.is_exact() {
                bad.push(format!("{name} x={x}: {fast} vs {slow}"));
            }
        }
    }
    c.check("gcd-composed sums equal direct sums", bad.is_empty(), bad.join("; "));

    let mut bad = Vec::new();
    for (g, conv) in [(B::Gcd, B::S), (B::PhiGcd, B::C), (B::Delta, B::One)] {
        for x in [1.0, 7.0, 50.0, 100.0] {
            let fast = partial_sum_conv_one(&b(g, 1), x, &cfg)?.value;
            let slow = partial_sum_direct(&b(conv, 1), x, x, &cfg)?.value;
            if fast != slow || !fast.is_exact() {
                bad.push(format!("{g} x={x}: {fast} vs {slow}"));
            }
        }
    }
    c.check("conv-one sums equal direct sums of g∗𝟙", bad.is_empty(), bad.join("; "));

    let shaped = [
        (B::One, 1),
        (B::Gcd, 1),
        (B::SigmaGcd, 1),
        (B::PhiGcd, 1),
        (B::F1, 1),
        (B::S, 1),
        (B::C, 1),
        (B::TauK, 2),
        (B::TildeTauK, 1),
        (B::TildeTauK, 2),
    ];
    let mut bad = Vec::new();
    for (name, k) in shaped {
        let f = b(name, k);
        assert!(f.shape().is_some(), "{name} registers an acceleration");
        for (x, y) in [(300.0, 300.0), (300.0, 211.0), (13.0, 77.0)] {
            let fast = partial_sum(&f, x, y, &cfg)?;
            let slow = partial_sum_direct(&f, x, y, &cfg)?;
            if fast.value != slow.value || !fast.value.is_exact() {
                bad.push(format!("{name}({k}) at ({x},{y}) via {}: {} vs {}", fast.method, fast.value, slow.value));
            }
        }
    }
    c.check("every integer-valued acceleration equals the direct sum at x ≤ 300", bad.is_empty(), bad.join("; "));

    let mut worst = 0f64;
    for name in [B::PhiRatio, B::A] {
        let f = b(name, 1);
        let fast = partial_sum(&f, 300.0, 300.0, &cfg)?.value.as_f64();
        let slow = partial_sum_direct(&f, 300.0, 300.0, &cfg)?.value.as_f64();
        worst = worst.max(((fast - slow) / slow).abs());
    }
    c.check("real-valued accelerations agree to 1e-12", worst < 1e-12, format!("max relative deviation {worst:.3e}"));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let bound = 24;
    let (mut comm, mut assoc, mut inv) = (true, true, true);
    for _ in 0..20 {
        let (f, g, h) = (
            random_unit_table(&mut rng, bound),
            random_unit_table(&mut rng, bound),
            random_unit_table(&mut rng, bound),
        );
        comm &= convolve_tables(&f, &g)? == convolve_tables(&g, &f)?;
        assoc &= convolve_tables(&convolve_tables(&f, &g)?, &h)? == convolve_tables(&f, &convolve_tables(&g, &h)?)?;
        inv &= convolve_tables(&f, &inverse_table(&f)?)?.is_delta();
    }
    c.check("convolution is commutative on random tables", comm, "");
    c.check("convolution is associative on random tables", assoc, "");
    c.check("table inverse satisfies f∗f⁻¹ = δ", inv, "");
    let f = DenseTable2::<i128>::from_fn(bound, |a, b| if a == 1 && b == 1 { 2 } else { rng.gen_range(-3..=3) });
    let rational_ok = match invert_integer_table(&f)? {
        InverseTable::Rational(g) => convolve_tables(&f.map(|&v| rational(v)), &g)?.is_delta(),
        InverseTable::Integer(_) => false,
    };
    c.check("non-unit origin inverts exactly over the rationals", rational_ok, "");
    Ok(())
}

fn constants(c: &mut Checks) -> Result<()> {
    let third = BigRational::new(1.into(), 3.into());
    c.check("tilde C'_2 = 1/3", tilde_c_k_prime_rational(2) == third, format!("{}", tilde_c_k_prime_rational(2)));
    let zeta2 = Constants::get().zeta2;
    let mut ok = true;
    for k in 1..=6u32 {
        let fact: u64 = (1..k as u64).product();
        let want = BigRational::new(1.into(), (fact * fact * (2 * k as u64 - 1)).into());
        ok &= tilde_c_k_prime_rational(k) == want;
        ok &= c_k_rational(k) == BigRational::new(1.into(), (fact * fact).into());
        ok &= (tilde_c_k_prime(k) - zeta2 * tilde_c_k(k)).abs() <= 1e-16 * tilde_c_k_prime(k);
    }
    c.check("C_k, tilde C_k and tilde C'_k agree with their factorial forms for k ≤ 6", ok, "");
    let z = Constants::get().zeta2_prime;
    let n = 200_000u64;
    let f = |x: f64| x.ln() / (x * x);
    let x = n as f64;
    let brute = -(compensated_sum((2..n).map(|m| f(m as f64))) + (x.ln() + 1.0) / x + f(x) / 2.0);
    c.check("zeta'(2) agrees with a truncated sum plus tail", (z - brute).abs() < 1e-12, format!("{z} vs {brute}"));
    let alt = zeta2_prime_euler_maclaurin(40, 8);
    c.check("zeta'(2) stable under the cut point", (z - alt).abs() < 1e-14, format!("{z} vs {alt}"));
    let one = Value::ONE;
    c.check("zeta(2) = pi^2/6", zeta2 == std::f64::consts::PI.powi(2) / 6.0 && one.is_exact(), "");
    Ok(())
}
