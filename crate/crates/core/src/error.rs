use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::poly::Poly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix [[{a}, {b}], [{c}, {d}]] does not have determinant 1")]
    NotUnimodular {
        a: BigUint,
        b: BigUint,
        c: BigUint,
        d: BigUint,
    },

    #[error("node indices start at 1")]
    ZeroIndex,

    #[error("first component of a divisor pair must be at least 1")]
    ZeroFirstComponent,

    #[error("({m}, {n}) is not a divisor pair of {poly}")]
    NotDivisorPair { poly: Poly, m: BigUint, n: BigUint },

    #[error("{poly} vanishes at n = {n}")]
    Vanishing { poly: Poly, n: BigInt },

    #[error("cannot subtract {m} from second component {n}")]
    SInverseUnderflow { m: BigUint, n: BigUint },

    #[error("divisor pairs belong to different polynomials ({left} and {right})")]
    ContextMismatch { left: Poly, right: Poly },

    #[error(
        "inverse reduction of ({m}, {n}) under {poly} breaks min(m, |f(n)|/m) <= n < max(m, |f(n)|/m)"
    )]
    ConditionViolated { poly: Poly, m: BigUint, n: BigUint },

    #[error("request for {requested} nodes exceeds the node budget of {budget}")]
    BudgetExceeded { requested: u128, budget: u64 },

    #[error("could not completely factor {0}")]
    IncompleteFactorization(BigUint),

    #[error("{0} is not prime")]
    NotPrime(BigUint),

    #[error("precondition failed: {0}")]
    Precondition(String),
}
