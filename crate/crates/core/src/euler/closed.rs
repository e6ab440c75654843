use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::local::Weight;
use crate::error::{Error, Result};

/// The worked examples with known limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    E1,
    E2,
    E3,
    E4,
    E5a,
    E5b,
    E6,
    E7,
    E8,
    E9,
}

impl ExampleId {
    pub const ALL: [ExampleId; 10] = [
        ExampleId::E1,
        ExampleId::E2,
        ExampleId::E3,
        ExampleId::E4,
        ExampleId::E5a,
        ExampleId::E5b,
        ExampleId::E6,
        ExampleId::E7,
        ExampleId::E8,
        ExampleId::E9,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::E1 => "1",
            ExampleId::E2 => "2",
            ExampleId::E3 => "3",
            ExampleId::E4 => "4",
            ExampleId::E5a => "5a",
            ExampleId::E5b => "5b",
            ExampleId::E6 => "6",
            ExampleId::E7 => "7",
            ExampleId::E8 => "8",
            ExampleId::E9 => "9",
        }
    }

    pub fn valid_ids() -> String {
        Self::ALL.map(|e| e.as_str()).join(", ")
    }
}

impl Serialize for ExampleId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExampleId> {
        if s == "5" {
            return Err(Error::UnknownExample {
                id: s.to_string(),
                valid: "5a (gcd·μ²(gcd)) or 5b (gcd·μ²(lcm))".into(),
            });
        }
        ExampleId::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::UnknownExample {
                id: s.to_string(),
                valid: ExampleId::valid_ids(),
            })
    }
}

/// A closed-form local factor and the weight already folded into it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedLocal {
    pub value: f64,
    pub weight: Weight,
}

/// Closed-form local factor of an example at `p`: weighted for Examples 1
/// and 5b, the bare local sum otherwise.
pub fn closed_local_factor(id: ExampleId, p: u64, k: u32) -> Result<ClosedLocal> {
    let q = 1.0 / p as f64;
    let pf = p as f64;
    let local = |value| Ok(ClosedLocal { value, weight: Weight::Unit });
    match id {
        ExampleId::E1 => {
            let kf = k as f64;
            Ok(ClosedLocal {
                value: (1.0 - q).powi(2 * (k as i32 - 1)) * (1.0 + 2.0 * (kf - 1.0) * q + (1.0 - kf) * q * q),
                weight: Weight::Th3i,
            })
        }
        ExampleId::E2 => local((pf + 2.0) / (pf - 1.0)),
        ExampleId::E3 => local(1.0 / (1.0 - q).powi(3)),
        ExampleId::E4 | ExampleId::E5a => local((1.0 + q).powi(2) / (1.0 - q)),
        ExampleId::E5b => Ok(ClosedLocal {
            value: (1.0 - q).powi(3) * (1.0 + 3.0 * q),
            weight: Weight::Th3ii,
        }),
        ExampleId::E6 => local(1.0 + 3.0 * q + q * q),
        ExampleId::E7 | ExampleId::E8 | ExampleId::E9 => Err(Error::UnknownExample {
            id: id.to_string(),
            valid: "1, 2, 3, 4, 5a, 5b, 6".into(),
        }),
    }
}
