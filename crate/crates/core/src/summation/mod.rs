//! Partial sums over lattice boxes, their normalizations, and auxiliary sums.

pub mod abel;
pub mod compensated;
pub mod mean;
pub mod partial;

pub use abel::{abel2d_check, abel2d_check_exact};
pub use compensated::{compensated_sum, Compensated};
pub use mean::{lemma1_sum, lemma4_sum, lemma5_sum, lemma6_sum, normalized_mean, NormalizedMean, Variant};
pub use partial::{
    partial_sum, partial_sum_conv_one, partial_sum_direct, partial_sum_gcd_composed, Method,
    ShapeSummer, SumConfig, SumResult, DEFAULT_BLOCKS, DEFAULT_POINT_BUDGET,
};
