use serde::Serialize;

use crate::arith::Builtin;
use crate::euler::ExampleId;
use crate::summation::{Method, Variant};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub x: f64,
    pub raw_sum: Value,
    pub normalized: f64,
    pub target: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// Least-squares fit `normalized ≈ c0 + c1/log x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub c0: f64,
    pub c1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub example: Option<ExampleId>,
    pub function_name: String,
    pub variant: Variant,
    pub k: u32,
    pub method: Method,
    pub target: f64,
    /// Where the target came from: a closed form or a truncated product.
    pub target_source: String,
    pub rows: Vec<Row>,
    pub fit: Option<Fit>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
    /// Set when a row could not be computed; later rows are skipped.
    pub aborted: Option<String>,
}

impl ConvergenceReport {
    pub(crate) fn new(example: Option<ExampleId>, f: &Builtin, variant: Variant, k: u32, method: Method) -> Self {
        ConvergenceReport {
            example,
            function_name: f.label(),
            variant,
            k,
            method,
            target: f64::NAN,
            target_source: String::new(),
            rows: Vec::new(),
            fit: None,
            verdicts: Vec::new(),
            notes: Vec::new(),
            aborted: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.aborted.is_none() && self.verdicts.iter().all(|v| v.pass)
    }
}

pub(crate) fn fit_inverse_log(rows: &[Row]) -> Option<Fit> {
    if rows.len() < 2 {
        return None;
    }
    let n = rows.len() as f64;
    let ts: Vec<f64> = rows.iter().map(|r| 1.0 / r.x.ln()).collect();
    let (mt, my) = (
        ts.iter().sum::<f64>() / n,
        rows.iter().map(|r| r.normalized).sum::<f64>() / n,
    );
    let sxx: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    let sxy: f64 = ts.iter().zip(rows).map(|(t, r)| (t - mt) * (r.normalized - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let c1 = sxy / sxx;
    Some(Fit { c0: my - c1 * mt, c1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_model() {
        let rows: Vec<Row> = [1e2, 1e3, 1e5]
            .iter()
            .map(|&x: &f64| {
                let v = 0.5 + 2.0 / x.ln();
                Row { x, raw_sum: Value::Real(0.0), normalized: v, target: 0.5, abs_err: 0.0, rel_err: 0.0 }
            })
            .collect();
        let f = fit_inverse_log(&rows).unwrap();
        assert!((f.c0 - 0.5).abs() < 1e-12 && (f.c1 - 2.0).abs() < 1e-12);
        assert!(fit_inverse_log(&rows[..1]).is_none());
    }
}
