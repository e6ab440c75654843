//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bivariate::arith::{local_spec, BuiltinName, Registry};
use bivariate::convolution::{inverse_local, mu_k_local, tilde_mu_local, DenseTable2, LocalTable};
use bivariate::euler::{closed_local_factor, local_factor, weighted_local_factor, ExampleId, Weight};
use bivariate::summation::{abel2d_check_exact, partial_sum, SumConfig, Variant};
use bivariate::verify::{run_convergence, run_example, run_suite, second_order_check, SecondOrder, Suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ZETA2_PRIME: f64 = -0.937_548_254_315_843_8;

fn zeta2() -> f64 {
    PI * PI / 6.0
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, format!("took {t:.2?}, limit {limit:?}"))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler φ on `0..=n` by sieve.
fn phi_table(n: usize) -> Vec<i64> {
    let mut phi: Vec<i64> = (0..=n as i64).collect();
    for p in 2..=n {
        if phi[p] == p as i64 {
            for m in (p..=n).step_by(p) {
                phi[m] -= phi[m] / p as i64;
            }
        }
    }
    phi
}

/// `F∗μ` from the relation `Σ_{d|n} (F∗μ)(d) = F(n)`.
fn mobius_inverse(f: &[i64]) -> Vec<i64> {
    let mut w = f.to_vec();
    for d in 1..w.len() {
        for m in (2 * d..w.len()).step_by(d) {
            w[m] -= w[d];
        }
    }
    w
}

/// `Σ_{n₁,n₂≤x} F(gcd(n₁,n₂)) = Σ_d (F∗μ)(d)⌊x/d⌋²`.
fn gcd_box_sum(f: &[i64], x: usize) -> i128 {
    let w = mobius_inverse(&f[..=x]);
    (1..=x).map(|d| w[d] as i128 * ((x / d) as i128).pow(2)).sum()
}

/// Inverse of a local table with unit origin, by the defining recursion.
fn brute_inverse(f: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = f.len();
    let mut g = vec![vec![0i128; n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut s = i128::from(a == 0 && b == 0);
            for i in 0..=a {
                for j in 0..=b {
                    if (i, j) != (a, b) {
                        s -= g[i][j] * f[a - i][b - j];
                    }
                }
            }
            g[a][b] = s / f[0][0];
        }
    }
    g
}

fn brute_convolve(f: &[Vec<i128>], g: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = f.len();
    let mut h = vec![vec![0i128; n]; n];
    for a in 0..n {
        for b in 0..n {
            for i in 0..=a {
                for j in 0..=b {
                    h[a][b] += f[i][j] * g[a - i][b - j];
                }
            }
        }
    }
    h
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let n = 7;
    let mut checked = 0;
    for p in [2u64, 3, 5, 7] {
        let ones = vec![vec![1i128; n]; n];
        let mut tau = ones.clone();
        for k in 1..=4u32 {
            if k > 1 {
                tau = brute_convolve(&tau, &ones);
            }
            let inv = brute_inverse(&tau);
            let lib = inverse_local(&LocalTable::from_fn(p, 6, |a, b| tau[a as usize][b as usize]))
                .map_err(|e| e.to_string())?;
            for a in 0..n {
                for b in 0..n {
                    let closed = mu_k_local(k, p, a as u32, b as u32);
                    ensure(
                        inv[a][b] == closed && *lib.get(a as u32, b as u32) == closed,
                        format!("mu_{k} at p={p} ({a},{b}): brute {} closed {closed}", inv[a][b]),
                    )?;
                    checked += 1;
                }
            }
        }
        let gcd_t: Vec<Vec<i128>> =
            (0..n).map(|a| (0..n).map(|b| (p as i128).pow(a.min(b) as u32)).collect()).collect();
        let inv = brute_inverse(&gcd_t);
        for a in 0..n {
            for b in 0..n {
                let closed = tilde_mu_local(p, a as u32, b as u32);
                ensure(inv[a][b] == closed, format!("tilde_mu at p={p} ({a},{b}): brute {} closed {closed}", inv[a][b]))?;
                checked += 1;
            }
        }
    }
    for s in [Suite::Lemma9, Suite::Lemma10] {
        let r = run_suite(s);
        ensure(r.all_pass(), format!("suite {s}: {} failures", r.failed))?;
    }
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("{checked} exact entries, {:.2?}", start.elapsed()))
}

/// `Σ a(n₁,n₂)/(n₁n₂)` exactly, as a reduced fraction over `lcm(1..=20)²`.
fn weighted_sum_fraction(t: &DenseTable2<i128>, nx: u64, ny: u64) -> String {
    let l: i128 = (1..=20i128).fold(1, |acc, m| acc / gcd_i128(acc, m) * m);
    let num: i128 = (1..=nx)
        .flat_map(|i| (1..=ny).map(move |j| (i, j)))
        .map(|(i, j)| t.get(i, j) * (l / i as i128) * (l / j as i128))
        .sum();
    let den = l * l;
    let g = gcd_i128(num, den);
    if den / g == 1 {
        format!("{}", num / g)
    } else {
        format!("{}/{}", num / g, den / g)
    }
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    (a, b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let t = DenseTable2::<i128>::from_fn(20, |_, _| rng.gen_range(-1000..=1000));
        let (x, y) = (rng.gen_range(1..=20u64), rng.gen_range(1..=20u64));
        let (lhs, rhs) = abel2d_check_exact(&t, x as f64 + 0.5, y as f64).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, format!("table {i}: {lhs} != {rhs}"))?;
        let oracle = weighted_sum_fraction(&t, x, y);
        ensure(lhs.to_string() == oracle, format!("table {i}: lhs {lhs}, independent sum {oracle}"))?;
    }
    let r = run_suite(Suite::Lemma7);
    ensure(r.all_pass(), format!("suite lemma7: {} failures", r.failed))?;
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("100 tables exact, {:.2?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    use BuiltinName as B;
    let start = Instant::now();
    let cases = [
        (ExampleId::E2, B::AbsRamanujan),
        (ExampleId::E3, B::SigmaGcd),
        (ExampleId::E4, B::PhiGcd),
        (ExampleId::E5a, B::F1),
        (ExampleId::E5b, B::F2),
        (ExampleId::E6, B::PhiRatio),
    ];
    let mut worst = 0f64;
    for (id, name) in cases {
        let spec = local_spec(name, 1);
        for p in [2u64, 3, 5, 7, 11] {
            let closed = closed_local_factor(id, p, 1).map_err(|e| e.to_string())?;
            let numeric = match closed.weight {
                Weight::Unit => {
                    // independent truncated double series
                    let brute: f64 = (0..=120u32)
                        .flat_map(|a| (0..=120u32).map(move |b| (a, b)))
                        .map(|(a, b)| spec.weighted(p, a, b))
                        .sum();
                    ensure((brute - closed.value).abs() < 1e-12, format!("example {id} p={p}: brute series {brute}, closed {}", closed.value))?;
                    local_factor(&spec, p, 1e-12).map_err(|e| e.to_string())?.value
                }
                w => weighted_local_factor(&spec, p, 1, w, 1e-12).map_err(|e| e.to_string())?,
            };
            let d = (numeric - closed.value).abs();
            worst = worst.max(d);
            ensure(d < 1e-12, format!("example {id} p={p}: numeric {numeric}, closed {}", closed.value))?;
        }
    }
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("max deviation {worst:.2e}, {:.2?}", start.elapsed()))
}

fn constant_json(example: &str) -> Result<serde_json::Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bivariate"))
        .args(["constant", "--example", example, "--pmax", "1000000"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), format!("constant --example {example} exited with {}", out.status))?;
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn field(v: &serde_json::Value, name: &str) -> Result<f64, String> {
    v[name].as_f64().ok_or_else(|| format!("missing numeric field {name}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let e3 = constant_json("3")?;
    ensure(field(&e3, "value")? == 1.0, format!("example 3 value {}", e3["value"]))?;
    ensure(field(&e3, "closed_form_value")? == 1.0, "example 3 closed form")?;
    let p3 = field(&e3, "product_value")?;
    ensure((p3 - 1.0).abs() < 1e-12, format!("example 3 product {p3}"))?;
    let want = [("7", 2.0 / (PI * PI), 1e-9), ("8", 12.0 / PI.powi(4), 1e-6), ("4", 1.0 / (zeta2() * zeta2()), 1e-6)];
    let mut diffs = Vec::new();
    for (id, target, tol) in want {
        let v = constant_json(id)?;
        let p = field(&v, "product_value")?;
        ensure((p - target).abs() < tol, format!("example {id}: product {p}, target {target}"))?;
        diffs.push(format!("ex{id} {:.1e}", (p - target).abs()));
    }
    within_time(start, Duration::from_secs(30))?;
    Ok(format!("ex3 exact, {}, {:.2?}", diffs.join(", "), start.elapsed()))
}

fn criterion_5() -> Outcome {
    let cfg = SumConfig::default();
    let x = 1_000_000usize;
    let base = 2.0 * EULER_GAMMA - 0.5 - zeta2() / 2.0;
    let phi = phi_table(x);
    let sigma: Vec<i64> = {
        let mut s = vec![0i64; x + 1];
        for d in 1..=x {
            for m in (d..=x).step_by(d) {
                s[m] += d as i64;
            }
        }
        s
    };
    let cases = [
        (SecondOrder::Ex3, 1.0, base, sigma),
        (SecondOrder::Ex4, 1.0 / zeta2().powi(2), (base - 2.0 * ZETA2_PRIME / zeta2()) / zeta2().powi(2), phi),
    ];
    let mut details = Vec::new();
    for (which, lead, predicted, table) in cases {
        let start = Instant::now();
        let c = second_order_check(which, x as f64, &cfg).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(elapsed <= Duration::from_secs(10), format!("{which} took {elapsed:.2?}"))?;
        ensure((c.predicted - predicted).abs() < 1e-12, format!("{which}: predicted {} vs {predicted}", c.predicted))?;
        let xf = x as f64;
        let measured = gcd_box_sum(&table, x) as f64 / (xf * xf) - lead * xf.ln();
        ensure((c.measured - measured).abs() < 1e-9, format!("{which}: measured {} vs independent {measured}", c.measured))?;
        let err = (c.measured - predicted).abs();
        ensure(err < 0.05, format!("{which}: |measured − predicted| = {err}"))?;
        details.push(format!("{which} err {err:.4} in {elapsed:.2?}"));
    }
    Ok(details.join(", "))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let xs = [1e3, 1e4, 1e5];
    let target = 1.0 / zeta2();
    let reg = Registry::new(100_000).map_err(|e| e.to_string())?;
    let f = reg.builtin(BuiltinName::Gcd, 1);
    let r = run_convergence(&f, Variant::Th1, 1, &xs, (target, "6/pi^2".into()), false, &SumConfig::default())
        .map_err(|e| e.to_string())?;
    ensure(r.rows.len() == 3 && r.aborted.is_none(), "incomplete run")?;
    let id: Vec<i64> = (0..=100_000).collect();
    for row in &r.rows {
        let x = row.x as usize;
        let s = gcd_box_sum(&id, x);
        ensure(row.raw_sum.as_int() == Some(s), format!("x={x}: raw sum {} vs independent {s}", row.raw_sum))?;
        let normalized = s as f64 / (row.x * row.x * row.x.ln());
        ensure((row.normalized - normalized).abs() < 1e-12, format!("x={x}: normalization"))?;
    }
    let errs: Vec<f64> = r.rows.iter().map(|row| (row.normalized - target).abs()).collect();
    ensure(errs.windows(2).all(|w| w[1] < w[0]), format!("errors not strictly decreasing: {errs:?}"))?;
    ensure(errs[2] < 0.05, format!("final error {}", errs[2]))?;
    within_time(start, Duration::from_secs(60))?;
    Ok(format!("errors {errs:.4?} via {}, {:.2?}", r.method, start.elapsed()))
}

/// Least squares `y ≈ c0 + c1/log x`.
fn fit_c0(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut su, mut sy, mut suu, mut suy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let u = 1.0 / x.ln();
        su += u;
        sy += y;
        suu += u * u;
        suy += u * y;
    }
    let c1 = (n * suy - su * sy) / (n * suu - su * su);
    (sy - c1 * su) / n
}

/// `Σ_{d₁,d₂≤x} F(gcd(d₁,d₂))⌊x/d₁⌋⌊x/d₂⌋`, the box sum of `(F∘gcd)∗𝟙`.
fn conv_one_brute(f: &[i64], x: u64) -> i128 {
    let mut s = 0i128;
    for a in 1..=x {
        for b in 1..=x {
            s += f[gcd(a, b) as usize] as i128 * (x / a) as i128 * (x / b) as i128;
        }
    }
    s
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let grid = [1e3, 1e4, 1e5];
    let phi = phi_table(1000);
    let id: Vec<i64> = (0..=1000).collect();
    let mut details = Vec::new();
    for (ex, target, table) in [(ExampleId::E7, 2.0 / (PI * PI), id), (ExampleId::E8, 12.0 / PI.powi(4), phi)] {
        let r = run_example(ex, None, &grid, 1_000_000, 1e-12, &SumConfig::default()).map_err(|e| e.to_string())?;
        ensure(r.rows.len() == 3 && r.aborted.is_none(), format!("example {ex}: incomplete run"))?;
        ensure((r.target - target).abs() < 1e-6, format!("example {ex}: target {} vs {target}", r.target))?;
        let brute = conv_one_brute(&table, 1000);
        ensure(r.rows[0].raw_sum.as_int() == Some(brute), format!("example {ex}: raw sum at 1000 {} vs {brute}", r.rows[0].raw_sum))?;
        let rel: Vec<f64> = r.rows.iter().map(|row| ((row.normalized - target) / target).abs()).collect();
        ensure(rel.windows(2).all(|w| w[1] <= w[0]), format!("example {ex}: relative errors {rel:?}"))?;
        let c0 = fit_c0(&r.rows.iter().map(|row| (row.x, row.normalized)).collect::<Vec<_>>());
        let off = ((c0 - target) / target).abs();
        ensure(off < 0.25, format!("example {ex}: c0 {c0} is {:.1}% off", off * 100.0))?;
        details.push(format!("ex{ex} c0 {:.1}% off", off * 100.0));
    }
    within_time(start, Duration::from_secs(300))?;
    Ok(format!("{}, {:.2?}", details.join(", "), start.elapsed()))
}

fn criterion_8() -> Outcome {
    use BuiltinName as B;
    let start = Instant::now();
    let r = run_suite(Suite::MethodAgreement);
    let failures: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    ensure(r.all_pass(), format!("failing checks: {failures:?}"))?;
    let reg = Registry::new(300).map_err(|e| e.to_string())?;
    let phi = phi_table(300);
    let id: Vec<i64> = (0..=300).collect();
    for (name, table) in [(B::Gcd, &id), (B::PhiGcd, &phi)] {
        let fast = partial_sum(&reg.builtin(name, 1).fn2, 300.0, 300.0, &SumConfig::default()).map_err(|e| e.to_string())?;
        let brute: i128 = (1..=300u64)
            .flat_map(|a| (1..=300u64).map(move |b| (a, b)))
            .map(|(a, b)| table[gcd(a, b) as usize] as i128)
            .sum();
        ensure(fast.value.as_int() == Some(brute), format!("{name}: {} vs brute {brute}", fast.value))?;
    }
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("{} checks, {:.2?}", r.checks.len(), start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("closed-form inverses exact", criterion_1),
        ("partial summation identity exact", criterion_2),
        ("local factors match closed forms", criterion_3),
        ("example constants", criterion_4),
        ("second-order terms", criterion_5),
        ("gcd mean converges to 6/pi^2", criterion_6),
        ("examples 7 and 8 trend and fit", criterion_7),
        ("accelerations and algebra laws", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
