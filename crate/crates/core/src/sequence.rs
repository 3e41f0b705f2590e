//! The 2-regular sequences formed by the second components of each tree,
//! read breadth-first.
//!
//! Every kernel obeys
//!
//! ```text
//! S(4k)   = 2 S(2k) - S(k)
//! S(4k+1) = 2 S(2k) + S(2k+1) + c
//! S(4k+2) = 2 S(2k+1) + S(2k) + c
//! S(4k+3) = 2 S(2k+1) - S(k)
//! ```
//!
//! with `c = beta` of the polynomial. `x^2 + 2x - 1` takes `|f(0)| = 1` from a
//! negative value, which bends the first level, so its recursion only starts
//! at `k = 2` and it carries seven initial values instead of three.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::{factorize, is_prime, FactorLimits};
use crate::maps::{check_budget, f_hat_inverse};
use crate::monoid::NodeIndex;
use crate::pairs::DivisorPair;
use crate::poly::EnumerablePoly;

/// `(S(k), S(2k), S(2k+1))` for one node `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VecTriple {
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
}

impl VecTriple {
    pub fn new(a: impl Into<BigUint>, b: impl Into<BigUint>, c: impl Into<BigUint>) -> Self {
        VecTriple {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// Triple of the left child: `(b, 2b - a, 2b + c + constant)`.
    pub fn left(&self, constant: u32) -> VecTriple {
        let twice_b = &self.b << 1u32;
        VecTriple {
            a: self.b.clone(),
            b: &twice_b - &self.a,
            c: twice_b + &self.c + constant,
        }
    }

    /// Triple of the right child: `(c, 2c + b + constant, 2c - a)`.
    pub fn right(&self, constant: u32) -> VecTriple {
        let twice_c = &self.c << 1u32;
        VecTriple {
            a: self.c.clone(),
            b: &twice_c + &self.b + constant,
            c: twice_c - &self.a,
        }
    }

    /// Divisor pair `(b - a, a)` of the node.
    pub fn pair_components(&self) -> (BigUint, BigUint) {
        (&self.b - &self.a, self.a.clone())
    }

    fn as_signed(&self) -> [BigInt; 3] {
        [
            BigInt::from(self.a.clone()),
            BigInt::from(self.b.clone()),
            BigInt::from(self.c.clone()),
        ]
    }
}

impl fmt::Display for VecTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Left-child matrix of the `x^2 + 1` vector tree.
pub const LEFT_MATRIX: [[i64; 3]; 3] = [[0, 1, 0], [-1, 2, 0], [0, 2, 1]];
/// Right-child matrix of the `x^2 + 1` vector tree.
pub const RIGHT_MATRIX: [[i64; 3]; 3] = [[0, 0, 1], [0, 1, 2], [-1, 0, 2]];

fn apply_matrix(mat: &[[i64; 3]; 3], v: &VecTriple) -> VecTriple {
    let x = v.as_signed();
    let row = |r: &[i64; 3]| -> BigUint {
        let sum: BigInt = r.iter().zip(&x).map(|(&k, xi)| k * xi).sum();
        sum.to_biguint()
            .expect("vector tree entries stay nonnegative")
    };
    VecTriple {
        a: row(&mat[0]),
        b: row(&mat[1]),
        c: row(&mat[2]),
    }
}

/// Rows of the `x^2 + 1` vector tree generated from `(0, 1, 1)` by the
/// left and right matrices.
#[derive(Debug, Clone)]
pub struct VectorRows {
    next: Option<Vec<VecTriple>>,
    remaining: u32,
}

impl Iterator for VectorRows {
    type Item = Vec<VecTriple>;

    fn next(&mut self) -> Option<Vec<VecTriple>> {
        let row = self.next.take()?;
        if self.remaining > 0 {
            self.remaining -= 1;
            let children = row
                .iter()
                .flat_map(|v| {
                    [
                        apply_matrix(&LEFT_MATRIX, v),
                        apply_matrix(&RIGHT_MATRIX, v),
                    ]
                })
                .collect();
            self.next = Some(children);
        }
        Some(row)
    }
}

pub fn vector_tree_rows(depth: u32, budget: u64) -> Result<VectorRows> {
    check_budget(depth, budget)?;
    Ok(VectorRows {
        next: Some(vec![VecTriple::new(0u32, 1u32, 1u32)]),
        remaining: depth,
    })
}

/// Grandchildren second components `(2b - a, 2b + c + k, 2c + b + k, 2c - a)`
/// of a node with value `a` and children `b`, `c`.
pub fn net_expand(a: &BigInt, b: &BigInt, c: &BigInt, constant: u32) -> [BigInt; 4] {
    let (twice_b, twice_c) = (b * 2, c * 2);
    [
        &twice_b - a,
        &twice_b + c + constant,
        &twice_c + b + constant,
        twice_c - a,
    ]
}

/// Recursion data for one sequence plus a cache of sparse lookups.
pub struct SSeqKernel {
    poly: EnumerablePoly,
    constant: u32,
    start: u64,
    /// `S(1), S(2), ..., S(4 * start - 1)`.
    initial: Vec<BigUint>,
    memo: RwLock<HashMap<NodeIndex, BigUint>>,
}

impl fmt::Debug for SSeqKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SSeqKernel")
            .field("poly", &self.poly)
            .field("constant", &self.constant)
            .field("start", &self.start)
            .field("initial", &self.initial)
            .finish_non_exhaustive()
    }
}

impl SSeqKernel {
    pub fn new(poly: EnumerablePoly) -> Self {
        let (start, initial): (u64, &[u32]) = match poly {
            EnumerablePoly::Psi2 => (2, &[0, 1, 1, 2, 3, 3, 2]),
            _ => (1, &[0, 1, 1]),
        };
        SSeqKernel {
            poly,
            constant: poly.beta(),
            start,
            initial: initial.iter().map(|&v| BigUint::from(v)).collect(),
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn poly(&self) -> EnumerablePoly {
        self.poly
    }

    pub fn constant(&self) -> u32 {
        self.constant
    }

    /// Smallest `k` at which the four-branch recursion applies.
    pub fn recursion_start(&self) -> u64 {
        self.start
    }

    pub fn initial_values(&self) -> Vec<(u64, BigUint)> {
        (1u64..).zip(self.initial.iter().cloned()).collect()
    }

    fn initial_triple(&self, k: u64) -> VecTriple {
        let at = |i: u64| self.initial[(i - 1) as usize].clone();
        VecTriple {
            a: at(k),
            b: at(2 * k),
            c: at(2 * k + 1),
        }
    }

    /// `(S(k), S(2k), S(2k+1))`, found by walking down from a seeded
    /// ancestor along the binary digits of `k`.
    pub fn triple(&self, k: &NodeIndex) -> VecTriple {
        let seed_bits = 64 - self.start.leading_zeros() as u64;
        let bits = k.value().bits();
        if bits <= seed_bits {
            // k < 2 * start, so the whole triple is initial data.
            return self.initial_triple(k.to_u64().expect("small index"));
        }
        let ancestor = (k.value() >> (bits - seed_bits))
            .to_u64()
            .expect("seed fits in u64");
        let mut v = self.initial_triple(ancestor);
        for i in (0..bits - seed_bits).rev() {
            v = if k.value().bit(i) {
                v.right(self.constant)
            } else {
                v.left(self.constant)
            };
        }
        v
    }

    pub fn s_value(&self, k: &NodeIndex) -> BigUint {
        if let Some(i) = k.to_u64() {
            if i as usize <= self.initial.len() {
                return self.initial[i as usize - 1].clone();
            }
        }
        if let Some(v) = self.memo.read().expect("memo lock").get(k) {
            return v.clone();
        }
        let v = self.triple(k).a;
        self.memo
            .write()
            .expect("memo lock")
            .insert(k.clone(), v.clone());
        v
    }

    /// `S(k)` for a 64-bit index; `k` must be at least 1.
    pub fn s(&self, k: u64) -> BigUint {
        self.s_value(&NodeIndex::new(k).expect("index must be positive"))
    }

    /// `[S(1), ..., S(count)]`, filled bottom-up.
    pub fn s_prefix(&self, count: usize) -> Vec<BigUint> {
        let mut out: Vec<BigUint> = self.initial.iter().take(count).cloned().collect();
        out.reserve(count.saturating_sub(out.len()));
        let at = |v: &Vec<BigUint>, i: usize| v[i - 1].clone();
        for i in out.len() + 1..=count {
            let (k, r) = (i / 4, i % 4);
            let (s_k, s_2k, s_2k1) = (at(&out, k), at(&out, 2 * k), at(&out, 2 * k + 1));
            let v = match r {
                0 => (s_2k << 1u32) - s_k,
                1 => (s_2k << 1u32) + s_2k1 + self.constant,
                2 => (s_2k1 << 1u32) + s_2k + self.constant,
                _ => (s_2k1 << 1u32) - s_k,
            };
            out.push(v);
        }
        out
    }

    /// `(S(2k) - S(k), S(k))`, the pair at node `k`.
    pub fn pair_at(&self, k: &NodeIndex) -> DivisorPair {
        let (m, n) = self.triple(k).pair_components();
        DivisorPair::from_parts_unchecked(self.poly.poly().clone(), m, n)
    }

    /// All node indices whose second component is `n`.
    ///
    /// Runs the inverse algorithm once per divisor of `|f(n)|` rather than
    /// searching the tree.
    pub fn fiber(&self, n: &BigUint) -> Result<BTreeSet<NodeIndex>> {
        let value = self.poly.abs_eval(n);
        let divisors = factorize(&value, &FactorLimits::default())
            .divisors()
            .ok_or_else(|| Error::IncompleteFactorization(value.clone()))?;
        divisors
            .into_iter()
            .map(|m| {
                let p = DivisorPair::of(self.poly, m, n.clone())?;
                Ok(f_hat_inverse(self.poly, &p)?.index)
            })
            .collect()
    }

    /// Whether the fiber of `n >= 1` is exactly the two boundary nodes
    /// `{2^n, 2^(n+1) - 1}`; this holds iff `|f(n)|` is prime.
    pub fn is_f_prime_via_fiber(&self, n: &BigUint) -> Result<bool> {
        if n.is_zero() {
            return Err(Error::Precondition("fiber primality needs n >= 1".into()));
        }
        let shift = n
            .to_u64()
            .ok_or_else(|| Error::Precondition(format!("n = {n} is too large")))?;
        let left = BigUint::one() << shift;
        let right = (&left << 1u32) - 1u32;
        let fiber = self.fiber(n)?;
        let boundary: BTreeSet<NodeIndex> = [NodeIndex::new(left)?, NodeIndex::new(right)?]
            .into_iter()
            .collect();
        Ok(fiber == boundary)
    }

    /// Direct primality test of `|f(n)|`, for cross-checking the fiber criterion.
    pub fn value_is_prime(&self, n: &BigUint) -> bool {
        is_prime(&self.poly.abs_eval(n))
    }
}
