//! Integer polynomials and the four enumerable quadratics.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, LazyLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::error::Error;

/// Integer polynomial, constant term first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new<I, C>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `x^2 + beta x + 1`.
    pub fn phi(beta: i64) -> Self {
        Poly::new([1, beta, 1])
    }

    /// `x^2 + beta x - 1`.
    pub fn psi(beta: i64) -> Self {
        Poly::new([-1, beta, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `|f(n)|` at a nonnegative argument.
    pub fn abs_eval(&self, n: &BigUint) -> BigUint {
        self.eval(&BigInt::from(n.clone())).magnitude().clone()
    }

    pub fn negated(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// The expression with `x` replaced by a number, e.g. `98^2 + 1`.
    pub fn display_at(&self, n: &BigUint) -> String {
        self.render(&n.to_string())
    }

    fn render(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.magnitude();
            if out.is_empty() {
                if c.sign() == Sign::Minus {
                    out.push('-');
                }
            } else {
                out.push_str(if c.sign() == Sign::Minus {
                    " - "
                } else {
                    " + "
                });
            }
            let show_coeff = power == 0 || !magnitude.is_one();
            if show_coeff {
                out.push_str(&magnitude.to_string());
            }
            match power {
                0 => {}
                1 => out.push_str(var),
                p => {
                    out.push_str(var);
                    out.push('^');
                    out.push_str(&p.to_string());
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

/// The four polynomials whose divisor-pair sets are enumerated by SL2(N0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EnumerablePoly {
    /// `x^2 + 1`
    Phi0,
    /// `x^2 + x + 1`
    Phi1,
    /// `x^2 + 2x - 1`
    Psi2,
    /// `x^2 + 3x + 1`
    Phi3,
}

static PHI0: LazyLock<Arc<Poly>> = LazyLock::new(|| Arc::new(Poly::phi(0)));
static PHI1: LazyLock<Arc<Poly>> = LazyLock::new(|| Arc::new(Poly::phi(1)));
static PSI2: LazyLock<Arc<Poly>> = LazyLock::new(|| Arc::new(Poly::psi(2)));
static PHI3: LazyLock<Arc<Poly>> = LazyLock::new(|| Arc::new(Poly::phi(3)));

impl EnumerablePoly {
    pub const ALL: [EnumerablePoly; 4] = [
        EnumerablePoly::Phi0,
        EnumerablePoly::Phi1,
        EnumerablePoly::Psi2,
        EnumerablePoly::Phi3,
    ];

    pub fn poly(self) -> &'static Arc<Poly> {
        match self {
            EnumerablePoly::Phi0 => &PHI0,
            EnumerablePoly::Phi1 => &PHI1,
            EnumerablePoly::Psi2 => &PSI2,
            EnumerablePoly::Phi3 => &PHI3,
        }
    }

    pub fn beta(self) -> u32 {
        match self {
            EnumerablePoly::Phi0 => 0,
            EnumerablePoly::Phi1 => 1,
            EnumerablePoly::Psi2 => 2,
            EnumerablePoly::Phi3 => 3,
        }
    }

    /// `true` for the `x^2 + beta x - 1` member.
    pub fn is_psi(self) -> bool {
        self == EnumerablePoly::Psi2
    }

    pub fn name(self) -> &'static str {
        match self {
            EnumerablePoly::Phi0 => "phi0",
            EnumerablePoly::Phi1 => "phi1",
            EnumerablePoly::Psi2 => "psi2",
            EnumerablePoly::Phi3 => "phi3",
        }
    }

    /// Which enumerable polynomial `p` is, if any. `-f` is not matched.
    pub fn from_poly(p: &Poly) -> Option<EnumerablePoly> {
        EnumerablePoly::ALL
            .into_iter()
            .find(|e| e.poly().as_ref() == p)
    }

    pub fn abs_eval(self, n: &BigUint) -> BigUint {
        self.poly().abs_eval(n)
    }
}

impl fmt::Display for EnumerablePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnumerablePoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        EnumerablePoly::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "unknown polynomial {s:?}; expected one of phi0, phi1, psi2, phi3"
                ))
            })
    }
}
