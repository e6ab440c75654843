use thiserror::Error;

/// Errors raised by the arithmetic, algebra and summation engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sieve bound {requested} exceeds the configured limit {limit}")]
    Capacity { requested: u64, limit: u64 },

    #[error("{n} is outside the sieve range 1..={bound}")]
    OutOfRange { n: u64, bound: u64 },

    #[error("unknown function `{name}`; valid names: {valid}")]
    UnknownName { name: String, valid: String },

    #[error("unknown example `{id}`; valid ids: {valid}")]
    UnknownExample { id: String, valid: String },

    #[error("unknown suite `{name}`; valid suites: {valid}")]
    UnknownSuite { name: String, valid: String },

    #[error("function `{0}` has no prime-power description")]
    NotMultiplicative(String),

    #[error("exact integer overflow while {0}")]
    Overflow(&'static str),

    #[error("local tables belong to different primes ({left} and {right})")]
    PrimeMismatch { left: u64, right: u64 },

    #[error("function is not invertible: its value at the origin is zero")]
    NotInvertible,

    #[error("value at the origin is not a unit of the integers; use rational arithmetic")]
    NotUnit,

    #[error("{points} lattice points exceed the point budget {budget}; use an accelerated method")]
    BudgetExceeded { points: u128, budget: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("local factor at p = {p} did not converge within {shells} shells")]
    NonConvergence { p: u64, shells: u32 },

    #[error("weighted local factor at p = {p} is {value}, which is not positive")]
    NonPositiveFactor { p: u64, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
