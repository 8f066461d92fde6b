//! Exact truncated multivariate power series and the rational generating
//! functions whose coefficients reproduce the moment tables.
//!
//! Coefficients are arbitrary-precision rationals end to end; a truncation
//! box (one inclusive degree bound per variable) is fixed at construction
//! and all ring operations are exact inside it. Since every series handled
//! here has nonnegative exponents only, any coefficient whose exponent lies
//! inside the box is exact regardless of how the expression was associated.

mod gf;
mod poly;

pub use gf::{
    block_sum_gf, complemented_first_moment_gf, diagonal_first_moment, first_moment_gf,
    second_moment_blocks, second_moment_gf, tail_sum_gf, trivariate_coefficient,
    RationalFunctionSpec, SecondMomentSeries, SeriesExpr,
};
pub use poly::TruncatedSeries;
