//! Divisor-pair trees of the enumerable quadratics `x^2 + 1`, `x^2 + x + 1`,
//! `x^2 + 2x - 1` and `x^2 + 3x + 1`.
//!
//! The free monoid SL2(N0) acts on divisor pairs `(m, n)` with `m | f(n)`:
//! `S` sends `(m, n)` to `(m, n + m)` and `T` is `S` conjugated by the
//! complement `(m, n) -> (|f(n)| / m, n)`. For exactly four quadratics the
//! orbit of `(1, 0)` is a bijection onto the divisor-pair set, so the binary
//! tree of the monoid lists every factorization `f(n) = m * m'` exactly once.
//! This crate provides that bijection and its inverse, the 2-regular
//! sequences reading off the second components, fiber and primality queries,
//! row statistics, and a checker for the enumerability criterion on
//! arbitrary integer polynomials.

pub mod analytics;
pub mod classify;
mod error;
pub mod factor;
pub mod maps;
pub mod monoid;
pub mod pairs;
pub mod poly;
pub mod sequence;

pub use error::{Error, Result};
pub use maps::{f_hat, f_hat_inverse, phi_beta, psi_beta, relatives, tree_rows, InverseTrace};
pub use monoid::{Gen, GenWord, Mat2, NodeIndex};
pub use pairs::DivisorPair;
pub use poly::{EnumerablePoly, Poly};
pub use sequence::SSeqKernel;

/// Default cap on the number of tree nodes a single request may generate.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 21;
