//! Row statistics of the divisor-pair trees, alternating-product
//! representations of primes, and the prime divisors of the enumerable
//! polynomials.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::{is_prime, is_prime_u64};
use crate::maps::{f_hat_inverse, tree_rows};
use crate::pairs::DivisorPair;
use crate::poly::EnumerablePoly;

/// Sums over row `k`: `M` of first components, `N` of second components and
/// `R` of the ratios `n / m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowStats {
    pub k: u32,
    pub m_sum: BigUint,
    pub n_sum: BigUint,
    pub ratio_sum: BigRational,
}

impl RowStats {
    /// `R_k / 2^k`, the mean ratio over the row.
    pub fn mean_ratio(&self) -> BigRational {
        &self.ratio_sum / BigRational::from_integer(BigInt::one() << self.k)
    }
}

pub fn row_stats_direct(f: EnumerablePoly, k: u32, budget: u64) -> Result<RowStats> {
    let row = tree_rows(f, k, budget)?
        .last()
        .expect("tree_rows yields at least the root row");
    let m_sum = row.iter().map(DivisorPair::m).sum();
    let n_sum = row.iter().map(DivisorPair::n).sum();
    let ratios: Vec<BigRational> = row
        .iter()
        .map(|p| BigRational::new(BigInt::from(p.n().clone()), BigInt::from(p.m().clone())))
        .collect();
    let ratio_sum = balanced_sum(ratios);
    Ok(RowStats {
        k,
        m_sum,
        n_sum,
        ratio_sum,
    })
}

/// Pairwise summation; keeps intermediate denominators small compared with a
/// running total.
fn balanced_sum(mut terms: Vec<BigRational>) -> BigRational {
    while terms.len() > 1 {
        terms = terms.par_chunks(2).map(|c| c.iter().sum()).collect();
    }
    terms.pop().unwrap_or_else(BigRational::zero)
}

/// Row statistics of the `x^2 + 1` tree from the linear recursions
/// `M_k = 5 M_{k-1} - 2 M_{k-2}` (same for `N`) and
/// `R_k = R_{k-1} + 3 * 2^(k-2)`.
///
/// At `k = 1` the increment is `3/2`, read as a rational.
pub fn row_stats_recursive(k: u32) -> RowStats {
    let (mut m_prev, mut m_cur) = (BigInt::from(1), BigInt::from(3));
    let (mut n_prev, mut n_cur) = (BigInt::zero(), BigInt::from(2));
    let mut ratio = BigRational::zero();
    for j in 1..=k {
        ratio += BigRational::new(BigInt::from(3) << j, BigInt::from(4));
    }
    let (m, n) = match k {
        0 => (m_prev, n_prev),
        _ => {
            for _ in 2..=k {
                let m_next = 5 * &m_cur - 2 * &m_prev;
                let n_next = 5 * &n_cur - 2 * &n_prev;
                m_prev = std::mem::replace(&mut m_cur, m_next);
                n_prev = std::mem::replace(&mut n_cur, n_next);
            }
            (m_cur, n_cur)
        }
    };
    RowStats {
        k,
        m_sum: m.to_biguint().expect("row sums are positive"),
        n_sum: n.to_biguint().expect("row sums are positive"),
        ratio_sum: ratio,
    }
}

/// `R_k = 3/2 (2^k - 1)` for the `x^2 + 1` tree.
pub fn ratio_closed_form(k: u32) -> BigRational {
    let pow = BigInt::one() << k;
    BigRational::new(3 * (pow - 1), BigInt::from(2))
}

/// A prime written as an alternating quotient of values of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRepresentation {
    pub p: BigUint,
    pub poly: EnumerablePoly,
    /// Arguments `n_0 < n_1 < ... < n_k`, all below `p`.
    pub n_values: Vec<BigUint>,
    /// The inverse reduction of `(p, n)`, from the input to `(1, 0)`.
    pub chain: Vec<DivisorPair>,
}

impl PrimeRepresentation {
    /// Arguments whose values sit in the numerator: `n_k, n_{k-2}, ...`.
    pub fn numerator_args(&self) -> Vec<&BigUint> {
        self.n_values.iter().rev().step_by(2).collect()
    }

    /// Arguments whose values sit in the denominator: `n_{k-1}, n_{k-3}, ...`.
    pub fn denominator_args(&self) -> Vec<&BigUint> {
        self.n_values.iter().rev().skip(1).step_by(2).collect()
    }

    /// The alternating product, without cancellation.
    pub fn product(&self) -> BigRational {
        let value = |n: &BigUint| BigInt::from(self.poly.abs_eval(n));
        let num: BigInt = self.numerator_args().into_iter().map(value).product();
        let den: BigInt = self.denominator_args().into_iter().map(value).product();
        BigRational::new(num, den)
    }
}

impl fmt::Display for PrimeRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = self.poly.poly();
        let group = |args: Vec<&BigUint>| -> String {
            args.into_iter()
                .map(|n| format!("({})", poly.display_at(n)))
                .collect()
        };
        write!(f, "{} = {}", self.p, group(self.numerator_args()))?;
        let den = self.denominator_args();
        if !den.is_empty() {
            write!(f, "/{}", group(den))?;
        }
        Ok(())
    }
}

/// Reads the representation of `p` off the inverse reduction of `(p, n)`.
///
/// The complement is applied at `n_k = n`, then at smaller and smaller
/// arguments; each complement divides the current value by the current
/// first component, which yields the alternating quotient.
pub fn prime_representation(
    f: EnumerablePoly,
    p: &BigUint,
    n: &BigUint,
) -> Result<PrimeRepresentation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    if n >= p {
        return Err(Error::Precondition(format!(
            "argument {n} must be below the prime {p}"
        )));
    }
    let start = DivisorPair::of(f, p.clone(), n.clone())?;
    let trace = f_hat_inverse(f, &start)?;
    let mut n_values: Vec<BigUint> = trace
        .pairs
        .windows(2)
        .filter(|w| w[0].n() == w[1].n())
        .map(|w| w[0].n().clone())
        .collect();
    n_values.reverse();
    Ok(PrimeRepresentation {
        p: p.clone(),
        poly: f,
        n_values,
        chain: trace.pairs,
    })
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Square root of a quadratic residue `a` modulo an odd prime (Tonelli-Shanks).
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p)
        .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
        .expect("odd primes have a non-residue");
    let mut c = pow_mod(z, q, p);
    let mut x = pow_mod(a, q.div_ceil(2), p);
    let mut t = pow_mod(a, q, p);
    let mut m = s;
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        x = mul_mod(x, b, p);
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        m = i;
    }
    Some(x)
}

fn eval_mod(f: EnumerablePoly, n: u64, p: u64) -> u64 {
    let beta = f.beta() as u64 % p;
    let constant = if f.is_psi() { p - 1 } else { 1 };
    let n = n % p;
    (mul_mod(n, n, p) + mul_mod(beta, n, p) + constant) % p
}

/// Every `n` in `[0, p)` with `f(n) = 0 mod p`, by evaluating each residue.
pub fn roots_mod_p_scan(f: EnumerablePoly, p: u64) -> Vec<u64> {
    (0..p).filter(|&n| eval_mod(f, n, p) == 0).collect()
}

/// Every `n` in `[0, p)` with `f(n) = 0 mod p`, in increasing order.
///
/// Odd primes use the quadratic formula with a modular square root of the
/// discriminant.
pub fn roots_mod_p(f: EnumerablePoly, p: u64) -> Result<Vec<u64>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(BigUint::from(p)));
    }
    if p == 2 {
        return Ok(roots_mod_p_scan(f, p));
    }
    let beta = f.beta() as u64 % p;
    // Discriminant beta^2 - 4c with c = -1 or 1.
    let four = 4 % p;
    let disc = if f.is_psi() {
        (mul_mod(beta, beta, p) + four) % p
    } else {
        (mul_mod(beta, beta, p) + p - four) % p
    };
    let Some(r) = sqrt_mod(disc, p) else {
        return Ok(Vec::new());
    };
    let half = p.div_ceil(2);
    let neg_beta = (p - beta) % p;
    let mut roots = vec![
        mul_mod((neg_beta + r) % p, half, p),
        mul_mod((neg_beta + p - r) % p, half, p),
    ];
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    let Some(len) = limit.to_usize().and_then(|l| l.checked_add(1)) else {
        return Vec::new();
    };
    if len < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; len];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < len {
        if sieve[i] {
            for j in (i * i..len).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..len as u64).filter(|&i| sieve[i as usize]).collect()
}

/// Primes `p <= p_max` dividing some value of `f`.
pub fn primes_with_divisor(f: EnumerablePoly, p_max: u64) -> Vec<u64> {
    primes_up_to(p_max)
        .into_par_iter()
        .filter(|&p| !roots_mod_p(f, p).expect("sieve output is prime").is_empty())
        .collect()
}
