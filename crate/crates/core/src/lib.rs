//! Exact arithmetic for polynomial sequences in the p-adic integers.
//!
//! The crate decides whether `(f(n))` is a low-discrepancy sequence in `Z_p`
//! (a permutation polynomial modulo `p` and `p^2`), computes exact p-adic and
//! real discrepancies, the p-adic pair-correlation statistic, and checks the
//! classical normalized permutation-polynomial tables up to degree six.

pub mod catalog;
pub mod cli;
pub mod discrepancy;
pub mod error;
pub mod padic;
pub mod paircorr;
pub mod permcheck;
pub mod poly;
pub mod sequence;

pub use error::{Error, Result};
pub use padic::{ExactRational, PAdicApprox};
pub use poly::IntPolynomial;
