use std::fmt;

use serde::{Serialize, Serializer};

/// Value of an arithmetic function: exact when integer-valued, double otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(i128),
    Real(f64),
}

impl Value {
    pub const ZERO: Value = Value::Int(0);
    pub const ONE: Value = Value::Int(1);

    pub fn as_f64(self) -> f64 {
        match self {
            Value::Int(v) => v as f64,
            Value::Real(v) => v,
        }
    }

    pub fn as_int(self) -> Option<i128> {
        match self {
            Value::Int(v) => Some(v),
            Value::Real(_) => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Value::Int(_))
    }

    pub fn is_zero(self) -> bool {
        match self {
            Value::Int(v) => v == 0,
            Value::Real(v) => v == 0.0,
        }
    }

    pub fn checked_add(self, other: Value) -> Option<Value> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.checked_add(b).map(Value::Int),
            (a, b) => Some(Value::Real(a.as_f64() + b.as_f64())),
        }
    }

    pub fn checked_mul(self, other: Value) -> Option<Value> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.checked_mul(b).map(Value::Int),
            (a, b) => Some(Value::Real(a.as_f64() * b.as_f64())),
        }
    }

    /// Product that degrades to a float instead of failing on overflow.
    ///
    /// Only used for local values at very large exponents, where the value
    /// feeds a floating-point series anyway.
    pub fn mul_or_real(self, other: Value) -> Value {
        self.checked_mul(other)
            .unwrap_or_else(|| Value::Real(self.as_f64() * other.as_f64()))
    }

    pub fn add_or_real(self, other: Value) -> Value {
        self.checked_add(other)
            .unwrap_or_else(|| Value::Real(self.as_f64() + other.as_f64()))
    }

    pub fn negated(self) -> Value {
        match self {
            Value::Int(v) => Value::Int(-v),
            Value::Real(v) => Value::Real(-v),
        }
    }

    /// Equality that is exact for integers and within `rel` for floats.
    pub fn approx_eq(self, other: Value, rel: f64) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (a, b) => {
                let (a, b) = (a.as_f64(), b.as_f64());
                let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
                (a - b).abs() <= rel * scale
            }
        }
    }
}

impl From<i128> for Value {
    fn from(v: i128) -> Self {
        Value::Int(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

/// Exact values serialize as integers, real ones as floats.
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Value::Int(v) => s.serialize_i128(v),
            Value::Real(v) => s.serialize_f64(v),
        }
    }
}

/// `p^e` as an exact integer when it fits, otherwise as a float.
pub fn pow_value(p: u64, e: u32) -> Value {
    match (p as i128).checked_pow(e) {
        Some(v) => Value::Int(v),
        None => Value::Real((p as f64).powi(e as i32)),
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Real(v) => f.write_str(&format_significant(*v, 15)),
        }
    }
}

/// Formats `v` with `digits` significant digits, like C's `%.{digits}g`.
pub fn format_significant(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
