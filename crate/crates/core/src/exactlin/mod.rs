//! Exact integer and rational linear algebra.

pub mod matrix;
pub mod rational;
pub mod simplex;
pub mod snf;

pub use matrix::{rational_inverse, row_echelon, IntMatrix};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use simplex::{feasible_point, has_nonneg_kernel_vector, NonnegVerdict};
pub use snf::{gale_dual, hermite_normal_form, row_sums, smith_normal_form, Snf};
