//! Exact carry statistics of binary addition.
//!
//! The crate computes, with integer and rational arithmetic only:
//!
//! - histograms of the Hamming-weight change w(a + (2^k-1-t)) - w(a) and the
//!   level-doubling dynamic program that builds them for every t < 2^k
//!   ([`carry`]);
//! - the Tu-Deng statistic P_{t,k} = |S_{t,k}| / 2^k and its exhaustive
//!   verification sweeps ([`carry`]);
//! - the densities of {n : w(n+t) >= w(n)} and {n : w(n+t) > w(n)} behind
//!   Cusick's inequalities ([`cusick`]);
//! - first and second moments of the statistic over t, by recurrence tables,
//!   closed forms and definitional sums ([`moments`]);
//! - truncated multivariate power series and the rational generating
//!   functions whose coefficients reproduce those moments ([`series`]).
//!
//! Enumeration oracles sit next to every fast path so each quantity can be
//! computed by two independent routes and compared bit for bit.

pub mod budget;
pub mod carry;
pub mod cusick;
pub mod digits;
pub mod error;
pub mod moments;
pub mod series;

pub use budget::MemoryBudget;
pub use error::{Error, Result};
