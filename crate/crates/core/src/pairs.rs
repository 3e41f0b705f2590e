//! Divisor pairs `(m, n)` with `m | f(n)` and the pair actions of `S`, `T`
//! and the complement.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{EnumerablePoly, Poly};

/// A member of the divisor-pair set of its polynomial.
///
/// The first component is always at least 1 and divides `|f(n)|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorPair {
    m: BigUint,
    n: BigUint,
    ctx: Arc<Poly>,
}

impl DivisorPair {
    pub fn new(ctx: Arc<Poly>, m: impl Into<BigUint>, n: impl Into<BigUint>) -> Result<Self> {
        let (m, n) = (m.into(), n.into());
        if m.is_zero() {
            return Err(Error::ZeroFirstComponent);
        }
        if !ctx.abs_eval(&n).is_multiple_of(&m) {
            return Err(Error::NotDivisorPair {
                poly: ctx.as_ref().clone(),
                m,
                n,
            });
        }
        Ok(DivisorPair { m, n, ctx })
    }

    pub fn of(f: EnumerablePoly, m: impl Into<BigUint>, n: impl Into<BigUint>) -> Result<Self> {
        DivisorPair::new(f.poly().clone(), m, n)
    }

    /// The pair `(1, 0)`.
    pub fn root(ctx: Arc<Poly>) -> Self {
        DivisorPair {
            m: BigUint::one(),
            n: BigUint::zero(),
            ctx,
        }
    }

    pub(crate) fn from_parts_unchecked(ctx: Arc<Poly>, m: BigUint, n: BigUint) -> Self {
        DivisorPair { m, n, ctx }
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn context(&self) -> &Arc<Poly> {
        &self.ctx
    }

    pub fn is_root(&self) -> bool {
        self.m.is_one() && self.n.is_zero()
    }

    /// Same components, ignoring context.
    pub fn has_components(&self, m: u64, n: u64) -> bool {
        self.m == BigUint::from(m) && self.n == BigUint::from(n)
    }

    /// `|f(n)|` for this pair's polynomial.
    pub fn value(&self) -> BigUint {
        self.ctx.abs_eval(&self.n)
    }

    /// `|f(n)| / m`, the complementary factor.
    pub fn cofactor(&self) -> Result<BigUint> {
        let value = self.value();
        if value.is_zero() {
            return Err(Error::Vanishing {
                poly: self.ctx.as_ref().clone(),
                n: BigInt::from(self.n.clone()),
            });
        }
        Ok(value / &self.m)
    }

    pub fn ensure_same_context(&self, other: &DivisorPair) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.ctx.as_ref().clone(),
                right: other.ctx.as_ref().clone(),
            })
        }
    }

    /// `(m, n + m)`.
    pub fn s_bar(&self) -> Self {
        DivisorPair {
            m: self.m.clone(),
            n: &self.n + &self.m,
            ctx: self.ctx.clone(),
        }
    }

    /// `(m, n + alpha m)`.
    pub fn s_bar_pow(&self, alpha: &BigUint) -> Self {
        DivisorPair {
            m: self.m.clone(),
            n: &self.n + alpha * &self.m,
            ctx: self.ctx.clone(),
        }
    }

    /// `(|f(n)| / m, n)`.
    pub fn c_bar(&self) -> Result<Self> {
        Ok(DivisorPair {
            m: self.cofactor()?,
            n: self.n.clone(),
            ctx: self.ctx.clone(),
        })
    }

    /// `c_bar(s_bar(c_bar(p)))`.
    pub fn t_bar(&self) -> Result<Self> {
        self.c_bar()?.s_bar().c_bar()
    }

    /// `(m, n - m)`, defined when `n >= m`.
    pub fn s_bar_inv(&self) -> Result<Self> {
        if self.n < self.m {
            return Err(Error::SInverseUnderflow {
                m: self.m.clone(),
                n: self.n.clone(),
            });
        }
        Ok(DivisorPair {
            m: self.m.clone(),
            n: &self.n - &self.m,
            ctx: self.ctx.clone(),
        })
    }
}

impl fmt::Display for DivisorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

pub fn poly_eval(f: &Poly, n: &BigInt) -> BigInt {
    f.eval(n)
}

/// `true` iff `m >= 1`, `n >= 0` and `m` divides `|f(n)|`.
pub fn pair_in_df(f: &Poly, m: &BigInt, n: &BigInt) -> bool {
    if !m.is_positive() || n.is_negative() {
        return false;
    }
    f.eval(n).magnitude().is_multiple_of(m.magnitude())
}

pub fn s_bar(p: &DivisorPair) -> DivisorPair {
    p.s_bar()
}

pub fn c_bar(p: &DivisorPair) -> Result<DivisorPair> {
    p.c_bar()
}

pub fn t_bar(p: &DivisorPair) -> Result<DivisorPair> {
    p.t_bar()
}

pub fn s_bar_inv(p: &DivisorPair) -> Result<DivisorPair> {
    p.s_bar_inv()
}
