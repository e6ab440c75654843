//! Local factors, truncated Euler products and the limit constants they build.

pub mod closed;
pub mod constants;
pub mod limit;
pub mod local;
pub mod product;

pub use closed::{closed_local_factor, ClosedLocal, ExampleId};
pub use constants::{c_k, tilde_c_k, tilde_c_k_prime, zeta2_prime, Constants, EULER_GAMMA, ZETA2};
pub use limit::{series_limit, theorem_limit, LimitForm, TheoremLimit};
pub use local::{local_factor, weighted_local_factor, LocalFactorResult, Weight};
pub use product::{global_product, series_direct, ProductResult, Trend};
