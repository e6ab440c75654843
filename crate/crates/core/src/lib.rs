//! Arithmetic functions of two variables: Dirichlet convolution, partial sums,
//! Euler products and numerical verification of mean-value asymptotics.

pub mod arith;
pub mod convolution;
pub mod error;
pub mod euler;
pub mod summation;
pub mod value;
pub mod verify;

pub use error::{Error, Result};
pub use value::Value;
