//! Sieving, factorization and the registry of concrete arithmetic functions.

pub mod fn2;
pub mod onevar;
pub mod registry;
pub mod sieve;

pub use fn2::{eval_multiplicative, Fn2, GcdShape, PrimePowerSpec};
pub use onevar::{OneVar, OneVarTable};
pub use registry::{local_spec, parse_builtin, Builtin, BuiltinName, Registry};
pub use sieve::{build_sieve, build_sieve_with_limit, FactorSieve, Factorization};
