use serde::Serialize;

use super::constants::{c_k, tilde_c_k, tilde_c_k_prime, ZETA2};
use super::local::Weight;
use super::product::{global_product, series_direct, ProductResult, Trend};
use crate::arith::{local_spec, BuiltinName, Fn2, PrimePowerSpec};
use crate::error::Result;
use crate::summation::{SumConfig, Variant};

/// How the limit constant is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitForm {
    /// constant × `∏ (1−1/p)^e L_f(p)`
    Product,
    /// constant × `∏ L_{f∗m}(p)` with `m` the inverse of the variant's
    /// comparison function (μ̃, μ_k or μ̃_k).
    Convolved,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremLimit {
    pub variant: Variant,
    pub k: u32,
    pub form: LimitForm,
    /// Leading rational or ζ(2)-type constant.
    pub constant: f64,
    pub product: ProductResult,
    /// `constant × product`; 0 or ∞ when the product diverges.
    pub value: f64,
}

/// Constant and weight of the product form.
pub fn product_form(variant: Variant, k: u32) -> (f64, Weight, u32) {
    match variant {
        Variant::Th1 => (1.0, Weight::Th3ii, 1),
        Variant::Th2i => (c_k(k), Weight::Th3i, k),
        Variant::Th2ii => (tilde_c_k_prime(k), Weight::Th3ii, k),
    }
}

/// Constant and inverse comparison function of the convolved form.
pub fn convolved_form(variant: Variant, k: u32) -> (f64, PrimePowerSpec) {
    match variant {
        Variant::Th1 => (1.0 / ZETA2, local_spec(BuiltinName::TildeMu, 1)),
        Variant::Th2i => (c_k(k), local_spec(BuiltinName::MuK, k)),
        Variant::Th2ii => (tilde_c_k(k), local_spec(BuiltinName::TildeMuK, k)),
    }
}

/// The limit of the normalized mean of a multiplicative `f`.
pub fn theorem_limit(
    spec: &PrimePowerSpec,
    k: u32,
    variant: Variant,
    form: LimitForm,
    pmax: u64,
    eps: f64,
) -> Result<TheoremLimit> {
    let (constant, product) = match form {
        LimitForm::Product => {
            let (c, w, kk) = product_form(variant, k);
            (c, global_product(spec, kk, w, pmax, eps)?)
        }
        LimitForm::Convolved => {
            let (c, inv) = convolved_form(variant, k);
            (c, global_product(&spec.convolve(&inv), k, Weight::Unit, pmax, eps)?)
        }
    };
    let value = match product.trend {
        Trend::Convergent => constant * product.value,
        Trend::DivergesToZero => 0.0,
        Trend::DivergesToInfinity => f64::INFINITY,
    };
    Ok(TheoremLimit { variant, k, form, constant, product, value })
}

/// Series form for functions without a prime-power description: `g` must
/// already be `f` convolved with the variant's inverse comparison function.
pub fn series_limit(g: &Fn2, k: u32, variant: Variant, n: f64, cfg: &SumConfig) -> Result<f64> {
    let (c, _) = convolved_form(variant, k);
    Ok(c * series_direct(g, n, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const EPS: f64 = 1e-12;

    #[test]
    fn s_limit_is_exact_in_convolved_form() {
        let t = theorem_limit(&local_spec(BuiltinName::S, 1), 2, Variant::Th2ii, LimitForm::Convolved, 1000, EPS).unwrap();
        assert_eq!(t.product.value, 1.0);
        assert!((t.value - 2.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn c_and_a_limits() {
        let t = theorem_limit(&local_spec(BuiltinName::C, 1), 2, Variant::Th2ii, LimitForm::Product, 100_000, EPS).unwrap();
        assert!((t.value - 12.0 / PI.powi(4)).abs() < 1e-6);
        let a = theorem_limit(&local_spec(BuiltinName::A, 1), 2, Variant::Th2ii, LimitForm::Product, 10_000, EPS).unwrap();
        let six = super::super::product::global_product(
            &local_spec(BuiltinName::PhiRatio, 1),
            1,
            Weight::Th3ii,
            10_000,
            EPS,
        )
        .unwrap();
        assert!((a.value - six.value / 3.0).abs() < 1e-10);
    }

    #[test]
    fn both_forms_agree_for_gcd_mean() {
        let gcd = local_spec(BuiltinName::Gcd, 1);
        let p = theorem_limit(&gcd, 1, Variant::Th1, LimitForm::Product, 100_000, EPS).unwrap();
        let c = theorem_limit(&gcd, 1, Variant::Th1, LimitForm::Convolved, 100_000, EPS).unwrap();
        assert!((c.value - 6.0 / (PI * PI)).abs() < 1e-15);
        assert!((p.value - c.value).abs() < 1e-5);
    }

    #[test]
    fn k_omega_with_k_one_has_limit_one() {
        let t = theorem_limit(&local_spec(BuiltinName::KOmega, 1), 1, Variant::Th2i, LimitForm::Product, 10_000, EPS).unwrap();
        assert!((t.value - 1.0).abs() < 1e-12);
    }
}
