use std::f64::consts::PI;

use crate::arith::{Builtin, BuiltinName, Registry};
use crate::error::{Error, Result};
use crate::euler::{theorem_limit, ExampleId, LimitForm, ZETA2};
use crate::summation::{partial_sum, partial_sum_direct, Method, NormalizedMean, SumConfig, Variant};

use super::report::{fit_inverse_log, ConvergenceReport, Row, Verdict};

/// Largest grid point for the Ramanujan-sum example, which has no acceleration.
pub const RAMANUJAN_CAP: f64 = 4000.0;
/// Allowed relative distance of the fitted `c0` from the target.
pub const FIT_TOLERANCE: f64 = 0.25;

/// Exact value of a limit constant together with its symbolic form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub value: f64,
    pub text: &'static str,
}

/// How an example is computed and what its limit is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleSpec {
    pub id: ExampleId,
    pub function: BuiltinName,
    pub variant: Variant,
    /// `k` of the normalization (and of the function for Example 1).
    pub k: u32,
    pub method: Method,
    pub form: LimitForm,
    pub grid: &'static [f64],
    pub grid_cap: Option<f64>,
}

impl ExampleSpec {
    /// Example 1 takes `k` from the caller; the others fix it.
    pub fn get(id: ExampleId, k: Option<u32>) -> Result<ExampleSpec> {
        use BuiltinName as B;
        let small: &'static [f64] = &[1e2, 1e3, 1e4];
        let gcd_grid: &'static [f64] = &[1e3, 1e4, 1e5, 1e6];
        let log_grid: &'static [f64] = &[1e3, 1e4, 1e5];
        let mk = |function, variant, k, method, form, grid| ExampleSpec {
            id,
            function,
            variant,
            k,
            method,
            form,
            grid,
            grid_cap: None,
        };
        let th2ii = Variant::Th2ii;
        let spec = match id {
            ExampleId::E1 => {
                let k = k.unwrap_or(2);
                if k == 0 {
                    return Err(Error::Domain("k must be positive".into()));
                }
                mk(B::KOmega, Variant::Th2i, k, Method::Direct, LimitForm::Product, small)
            }
            ExampleId::E2 => ExampleSpec {
                grid_cap: Some(RAMANUJAN_CAP),
                ..mk(B::AbsRamanujan, th2ii, 1, Method::Direct, LimitForm::Product, &[250.0, 500.0, 1000.0, 2000.0, 4000.0])
            },
            ExampleId::E3 => mk(B::SigmaGcd, th2ii, 1, Method::GcdComposed, LimitForm::Product, gcd_grid),
            ExampleId::E4 => mk(B::PhiGcd, th2ii, 1, Method::GcdComposed, LimitForm::Product, gcd_grid),
            ExampleId::E5a => mk(B::F1, th2ii, 1, Method::Direct, LimitForm::Product, small),
            ExampleId::E5b => mk(B::F2, th2ii, 1, Method::Direct, LimitForm::Product, small),
            ExampleId::E6 => mk(B::PhiRatio, th2ii, 1, Method::Direct, LimitForm::Product, small),
            ExampleId::E7 => mk(B::S, th2ii, 2, Method::PhiWeighted, LimitForm::Convolved, log_grid),
            ExampleId::E8 => mk(B::C, th2ii, 2, Method::PhiWeighted, LimitForm::Product, log_grid),
            ExampleId::E9 => mk(B::A, th2ii, 2, Method::PhiWeighted, LimitForm::Product, log_grid),
        };
        Ok(spec)
    }

    /// The exact limit, when one is known.
    pub fn closed_form(&self) -> Option<ClosedForm> {
        let inv_z2_sq = 1.0 / (ZETA2 * ZETA2);
        match self.id {
            ExampleId::E1 if self.k == 1 => Some(ClosedForm { value: 1.0, text: "1" }),
            ExampleId::E3 => Some(ClosedForm { value: 1.0, text: "1" }),
            ExampleId::E4 | ExampleId::E5a => Some(ClosedForm { value: inv_z2_sq, text: "36/pi^4" }),
            ExampleId::E7 => Some(ClosedForm { value: 2.0 / (PI * PI), text: "2/pi^2" }),
            ExampleId::E8 => Some(ClosedForm { value: 12.0 / PI.powi(4), text: "12/pi^4" }),
            _ => None,
        }
    }

    /// `k` passed to the function itself.
    pub fn function_k(&self) -> u32 {
        if self.function.takes_k() || self.function == BuiltinName::KOmega {
            self.k
        } else {
            1
        }
    }
}

/// Target of a convergence run: closed form when known, else the truncated product.
pub fn example_target(spec: &ExampleSpec, pmax: u64, eps: f64) -> Result<(f64, String)> {
    if let Some(c) = spec.closed_form() {
        return Ok((c.value, format!("closed form {}", c.text)));
    }
    let t = theorem_limit(&crate::arith::local_spec(spec.function, spec.function_k()), spec.k, spec.variant, spec.form, pmax, eps)?;
    Ok((t.value, format!("product up to pmax={pmax}")))
}

/// Runs a normalized-mean experiment for an arbitrary function.
pub fn run_convergence(
    f: &Builtin,
    variant: Variant,
    k: u32,
    xs: &[f64],
    target: (f64, String),
    direct: bool,
    cfg: &SumConfig,
) -> Result<ConvergenceReport> {
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be strictly ascending".into()));
    }
    let method = match (direct, f.fn2.shape()) {
        (false, Some(s)) if s.outer == crate::arith::OneVar::One && !s.conv_one => Method::GcdComposed,
        (false, Some(_)) => Method::PhiWeighted,
        _ => Method::Direct,
    };
    let mut report = ConvergenceReport::new(None, f, variant, k, method);
    report.target = target.0;
    report.target_source = target.1;
    for &x in xs {
        let y = x;
        variant.denominator(k, x, y)?;
        let sum = if direct { partial_sum_direct(&f.fn2, x, y, cfg) } else { partial_sum(&f.fn2, x, y, cfg) };
        let sum = match sum {
            Ok(s) => s,
            Err(e @ Error::BudgetExceeded { .. }) => {
                report.aborted = Some(format!("x={x}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let m = NormalizedMean::from_sum(sum, variant, k)?;
        let abs_err = (m.normalized - report.target).abs();
        report.rows.push(Row {
            x,
            raw_sum: m.sum.value,
            normalized: m.normalized,
            target: report.target,
            abs_err,
            rel_err: abs_err / report.target.abs(),
        });
    }
    report.fit = fit_inverse_log(&report.rows);
    Ok(report)
}

/// Runs one of the worked examples on `grid` (its default grid when empty).
pub fn run_example(id: ExampleId, k: Option<u32>, grid: &[f64], pmax: u64, eps: f64, cfg: &SumConfig) -> Result<ConvergenceReport> {
    let spec = ExampleSpec::get(id, k)?;
    let mut notes = Vec::new();
    let mut xs: Vec<f64> = if grid.is_empty() { spec.grid.to_vec() } else { grid.to_vec() };
    if let Some(cap) = spec.grid_cap {
        if xs.iter().any(|&x| x > cap) {
            notes.push(format!("grid capped at x={cap}: no accelerated method for this function"));
            xs.retain(|&x| x <= cap);
        }
    }
    let max_x = xs.iter().cloned().fold(1.0, f64::max);
    let reg = Registry::new(max_x as u64)?;
    let f = reg.builtin(spec.function, spec.function_k());
    let target = example_target(&spec, pmax, eps)?;
    let direct = spec.method == Method::Direct;
    let mut report = run_convergence(&f, spec.variant, spec.k, &xs, target, direct, cfg)?;
    report.example = Some(id);
    report.notes.extend(notes);
    report.verdicts = example_verdicts(&spec, &report);
    Ok(report)
}

fn example_verdicts(spec: &ExampleSpec, r: &ConvergenceReport) -> Vec<Verdict> {
    let mut out = Vec::new();
    match spec.id {
        ExampleId::E3 | ExampleId::E4 => {
            let tail: Vec<f64> = r.rows.iter().rev().take(3).rev().map(|row| row.abs_err).collect();
            let pass = tail.len() >= 2 && tail.windows(2).all(|w| w[1] < w[0]);
            out.push(Verdict {
                name: "abs_err strictly decreasing over the last three rows".into(),
                pass,
                detail: format!("{tail:?}"),
            });
        }
        ExampleId::E7 | ExampleId::E8 | ExampleId::E9 => {
            let rel: Vec<f64> = r.rows.iter().map(|row| row.rel_err).collect();
            out.push(Verdict {
                name: "rel_err non-increasing".into(),
                pass: rel.len() >= 2 && rel.windows(2).all(|w| w[1] <= w[0]),
                detail: format!("{rel:?}"),
            });
            if r.rows.last().is_some_and(|row| row.x >= 1e5) {
                let (pass, detail) = match r.fit {
                    Some(f) => {
                        let d = (f.c0 - r.target).abs() / r.target.abs();
                        (d <= FIT_TOLERANCE, format!("c0={} target={} relative distance {d:.4}", f.c0, r.target))
                    }
                    None => (false, "no fit".into()),
                };
                out.push(Verdict { name: format!("fit c0 within {}% of target", FIT_TOLERANCE * 100.0), pass, detail });
            }
        }
        _ => {}
    }
    out
}
