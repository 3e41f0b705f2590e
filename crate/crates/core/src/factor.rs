//! Integer factorization used for divisor enumeration.
//!
//! Inputs below 2^64 are factored completely and deterministically: trial
//! division by small primes, then Brent's variant of Pollard rho with a
//! deterministic Miller-Rabin test. Larger inputs go through bounded trial
//! division and a budgeted rho search; whatever cannot be split is reported
//! as an unfactored cofactor instead of being guessed at.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// Deterministic for every n < 2^64.
const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 97 * 97 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES_U64 {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality test on arbitrary-precision integers. Exact below 2^64; above
/// that a Miller-Rabin test over the first 25 prime bases.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut ys = 2u64;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization of a 64-bit integer as sorted `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    if n <= 1 {
        return Vec::new();
    }
    for &p in &SMALL_PRIMES {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            primes.push(m);
            continue;
        }
        let d = rho_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
    collect_powers(primes)
}

fn collect_powers<T: Ord + Clone>(mut primes: Vec<T>) -> Vec<(T, u32)> {
    primes.sort();
    let mut out: Vec<(T, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Work limits for inputs that do not fit in 64 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorLimits {
    /// Trial division runs over all integers up to this bound.
    pub trial_bound: u64,
    /// Total rho iterations allowed per composite cofactor; 0 disables rho.
    pub rho_iterations: u64,
}

impl Default for FactorLimits {
    fn default() -> Self {
        FactorLimits {
            trial_bound: 1 << 16,
            rho_iterations: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Prime factors found so far, sorted, with multiplicities.
    pub primes: Vec<(BigUint, u32)>,
    /// Composite part that could not be split within the limits.
    pub unfactored: Vec<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    /// Number of divisors; `None` when the factorization is incomplete.
    pub fn divisor_count(&self) -> Option<BigUint> {
        if !self.is_complete() {
            return None;
        }
        Some(
            self.primes
                .iter()
                .map(|(_, e)| BigUint::from(*e + 1))
                .product(),
        )
    }

    /// All positive divisors in increasing order; `None` when incomplete.
    pub fn divisors(&self) -> Option<Vec<BigUint>> {
        if !self.is_complete() {
            return None;
        }
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.primes {
            let base_len = divs.len();
            let mut power = BigUint::one();
            for _ in 0..*e {
                power *= p;
                for i in 0..base_len {
                    divs.push(&divs[i] * &power);
                }
            }
        }
        divs.sort();
        Some(divs)
    }
}

fn rho_big(n: &BigUint, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut spent = 0u64;
    for c in 1u32..=16 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let batch = 64.min(r - k);
                for _ in 0..batch {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                spent += batch;
                g = q.gcd(n);
                k += batch;
            }
            r *= 2;
            if spent > budget {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Factors `n`; complete whenever `n < 2^64`.
pub fn factorize(n: &BigUint, limits: &FactorLimits) -> Factorization {
    if let Some(small) = n.to_u64() {
        return Factorization {
            primes: factor_u64(small)
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e))
                .collect(),
            unfactored: Vec::new(),
        };
    }

    let mut primes = Vec::new();
    let mut rest = n.clone();
    let mut d = 2u64;
    while d <= limits.trial_bound {
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        while (&rest % d).is_zero() {
            primes.push(dd.clone());
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }

    let mut unfactored = Vec::new();
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            primes.extend(
                factor_u64(small)
                    .into_iter()
                    .flat_map(|(p, e)| std::iter::repeat_n(BigUint::from(p), e as usize)),
            );
            continue;
        }
        if is_prime(&m) {
            primes.push(m);
            continue;
        }
        match rho_big(&m, limits.rho_iterations) {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => unfactored.push(m),
        }
    }
    unfactored.sort();
    Factorization {
        primes: collect_powers(primes),
        unfactored,
    }
}
