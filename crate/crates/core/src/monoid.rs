//! The free monoid SL2(N0) of nonnegative integer 2x2 matrices with
//! determinant 1, generated by `S = [[1,0],[1,1]]` and `T = [[1,1],[0,1]]`.
//!
//! Words are written as matrix products: the word `g_r ... g_1` is the
//! product with the leftmost letter multiplied last, so `g_1` is the first
//! step down from the root of the generator tree. Tree nodes are addressed
//! by heap index (root 1, children `2k` for S and `2k + 1` for T).

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of SL2(N0), stored row-major as `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    a: BigUint,
    b: BigUint,
    c: BigUint,
    d: BigUint,
}

impl Mat2 {
    pub fn new(
        a: impl Into<BigUint>,
        b: impl Into<BigUint>,
        c: impl Into<BigUint>,
        d: impl Into<BigUint>,
    ) -> Result<Self> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if &a * &d != &b * &c + 1u32 {
            return Err(Error::NotUnimodular { a, b, c, d });
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub(crate) fn from_parts_unchecked(a: BigUint, b: BigUint, c: BigUint, d: BigUint) -> Self {
        debug_assert!(&a * &d == &b * &c + 1u32);
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::from_parts_unchecked(One::one(), Zero::zero(), Zero::zero(), One::one())
    }

    pub fn s() -> Self {
        Self::s_pow(1u32)
    }

    pub fn t() -> Self {
        Self::t_pow(1u32)
    }

    /// `S^alpha = [[1, 0], [alpha, 1]]`.
    pub fn s_pow(alpha: impl Into<BigUint>) -> Self {
        Self::from_parts_unchecked(One::one(), Zero::zero(), alpha.into(), One::one())
    }

    /// `T^alpha = [[1, alpha], [0, 1]]`.
    pub fn t_pow(alpha: impl Into<BigUint>) -> Self {
        Self::from_parts_unchecked(One::one(), alpha.into(), Zero::zero(), One::one())
    }

    pub fn generator(g: Gen) -> Self {
        match g {
            Gen::S => Self::s(),
            Gen::T => Self::t(),
        }
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn c(&self) -> &BigUint {
        &self.c
    }

    pub fn d(&self) -> &BigUint {
        &self.d
    }

    pub fn entries(&self) -> [&BigUint; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// The complement involution `[[a,b],[c,d]] -> [[d,c],[b,a]]`.
    pub fn complement(&self) -> Self {
        Mat2 {
            a: self.d.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.a.clone(),
        }
    }

    /// `g * self` without a general product.
    pub fn prepend(&self, g: Gen) -> Self {
        match g {
            Gen::S => Mat2 {
                a: self.a.clone(),
                b: self.b.clone(),
                c: &self.a + &self.c,
                d: &self.b + &self.d,
            },
            Gen::T => Mat2 {
                a: &self.a + &self.c,
                b: &self.b + &self.d,
                c: self.c.clone(),
                d: self.d.clone(),
            },
        }
    }

    /// The generator `g` with `self = g * rest`, if `self` is not the identity.
    ///
    /// `self = S * B` exactly when the bottom row dominates the top row, and
    /// `self = T * B` when the top row dominates. For `self != I` exactly one
    /// of the two holds.
    pub fn leading_generator(&self) -> Option<Gen> {
        if self.is_identity() {
            None
        } else if self.c >= self.a && self.d >= self.b {
            Some(Gen::S)
        } else {
            debug_assert!(self.a >= self.c && self.b >= self.d);
            Some(Gen::T)
        }
    }

    /// Splits `self = g * rest`.
    pub fn strip_leading(&self) -> Option<(Gen, Mat2)> {
        let g = self.leading_generator()?;
        let rest = match g {
            Gen::S => Mat2 {
                a: self.a.clone(),
                b: self.b.clone(),
                c: &self.c - &self.a,
                d: &self.d - &self.b,
            },
            Gen::T => Mat2 {
                a: &self.a - &self.c,
                b: &self.b - &self.d,
                c: self.c.clone(),
                d: self.d.clone(),
            },
        };
        Some((g, rest))
    }

    pub fn to_word(&self) -> GenWord {
        matrix_to_word(self)
    }

    /// Heap index of this matrix in the generator tree.
    pub fn index(&self) -> NodeIndex {
        word_to_index(&self.to_word())
    }
}

impl Default for Mat2 {
    fn default() -> Self {
        Self::identity()
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        Mat2::from_parts_unchecked(
            &self.a * &rhs.a + &self.b * &rhs.c,
            &self.a * &rhs.b + &self.b * &rhs.d,
            &self.c * &rhs.a + &self.d * &rhs.c,
            &self.c * &rhs.b + &self.d * &rhs.d,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        &self * &rhs
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    x * y
}

pub fn complement(x: &Mat2) -> Mat2 {
    x.complement()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    S,
    T,
}

impl Gen {
    pub fn swap(self) -> Gen {
        match self {
            Gen::S => Gen::T,
            Gen::T => Gen::S,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Gen::S => 'S',
            Gen::T => 'T',
        }
    }
}

/// A word over `{S, T}`; `letters[0]` is the leftmost letter.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenWord {
    letters: Vec<Gen>,
}

impl GenWord {
    pub fn empty() -> Self {
        GenWord::default()
    }

    pub fn new(letters: Vec<Gen>) -> Self {
        GenWord { letters }
    }

    /// Word `g_0^{e_0} g_1^{e_1} ...` from leftmost block to rightmost.
    pub fn from_blocks<I: IntoIterator<Item = (Gen, usize)>>(blocks: I) -> Self {
        let letters = blocks
            .into_iter()
            .flat_map(|(g, e)| std::iter::repeat_n(g, e))
            .collect();
        GenWord { letters }
    }

    pub fn letters(&self) -> &[Gen] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word for `g * self`.
    pub fn prepended(&self, g: Gen) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(g);
        letters.extend_from_slice(&self.letters);
        GenWord { letters }
    }

    /// Letter-wise swap of S and T; the word of the complement matrix.
    pub fn swapped(&self) -> Self {
        GenWord {
            letters: self.letters.iter().map(|g| g.swap()).collect(),
        }
    }

    /// Run-length form such as `S^2TS^2T`.
    pub fn compact(&self) -> String {
        let mut out = String::new();
        let mut iter = self.letters.iter().peekable();
        while let Some(&g) = iter.next() {
            let mut run = 1;
            while iter.peek() == Some(&&g) {
                iter.next();
                run += 1;
            }
            out.push(g.as_char());
            if run > 1 {
                out.push('^');
                out.push_str(&run.to_string());
            }
        }
        if out.is_empty() {
            out.push('I');
        }
        out
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.letters {
            write!(f, "{}", g.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for GenWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                'S' | 's' => Ok(Gen::S),
                'T' | 't' => Ok(Gen::T),
                other => Err(Error::Precondition(format!(
                    "unexpected letter {other:?} in generator word"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(GenWord::new)
    }
}

pub fn word_to_matrix(w: &GenWord) -> Mat2 {
    w.letters
        .iter()
        .rev()
        .fold(Mat2::identity(), |acc, &g| acc.prepend(g))
}

pub fn matrix_to_word(x: &Mat2) -> GenWord {
    let mut letters = Vec::new();
    let mut rest = x.clone();
    while let Some((g, next)) = rest.strip_leading() {
        letters.push(g);
        rest = next;
    }
    GenWord { letters }
}

/// Heap index of a node in a binary tree: root 1, children `2k` and `2k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeIndex(BigUint);

impl NodeIndex {
    pub fn new(k: impl Into<BigUint>) -> Result<Self> {
        let k = k.into();
        if k.is_zero() {
            return Err(Error::ZeroIndex);
        }
        Ok(NodeIndex(k))
    }

    pub fn root() -> Self {
        NodeIndex(BigUint::one())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Row of the node; the root is on row 0.
    pub fn row(&self) -> u64 {
        self.0.bits() - 1
    }

    pub fn parent(&self) -> Option<NodeIndex> {
        if self.0.is_one() {
            None
        } else {
            Some(NodeIndex(&self.0 >> 1u32))
        }
    }

    pub fn child(&self, g: Gen) -> NodeIndex {
        match g {
            Gen::S => NodeIndex(&self.0 << 1u32),
            Gen::T => NodeIndex((&self.0 << 1u32) + 1u32),
        }
    }

    /// The horizontally mirrored node in the same row.
    pub fn mirror(&self) -> NodeIndex {
        let first = BigUint::one() << self.row();
        NodeIndex(&first * 3u32 - 1u32 - &self.0)
    }
}

impl From<NodeIndex> for BigUint {
    fn from(k: NodeIndex) -> BigUint {
        k.0
    }
}

impl fmt::Display for NodeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn word_to_index(w: &GenWord) -> NodeIndex {
    let mut k = BigUint::one();
    for g in w.letters.iter().rev() {
        k <<= 1u32;
        if *g == Gen::T {
            k += 1u32;
        }
    }
    NodeIndex(k)
}

pub fn index_to_word(k: &NodeIndex) -> GenWord {
    let row = k.row();
    // Bits below the leading one, most significant first, are the path from
    // the root; each step prepends its letter.
    let letters = (0..row)
        .map(|i| if k.0.bit(i) { Gen::T } else { Gen::S })
        .collect();
    GenWord { letters }
}
