//! S-parts of linear recurrence terms.
//!
//! The crate computes S-parts and greatest prime factors of terms of integer
//! linear recurrences, classifies sequences (degenerate, dominant root,
//! p-adic dominant root), evaluates the limit exponent delta and derives
//! explicit effective exponents `(c1, N0)` with `[u_n]_S <= |u_n|^(1 - c1)`
//! for `n >= N0` from explicit lower bounds for linear forms in logarithms.

pub mod algnum;
pub mod ball;
pub mod bounds;
pub mod config;
pub mod delta;
pub mod error;
pub mod harness;
pub mod interval;
pub mod intpoly;
pub mod recurrence;
pub mod sparts;
pub mod specfile;

pub use error::{Error, Result};
