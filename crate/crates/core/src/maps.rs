//! The equivariant maps from SL2(N0) onto divisor pairs, their inverse, and
//! breadth-first generation of the divisor-pair trees.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::monoid::{word_to_index, word_to_matrix, Gen, GenWord, Mat2, NodeIndex};
use crate::pairs::DivisorPair;
use crate::poly::{EnumerablePoly, Poly};

fn phi_context(beta: u32) -> Arc<Poly> {
    match beta {
        0 => EnumerablePoly::Phi0.poly().clone(),
        1 => EnumerablePoly::Phi1.poly().clone(),
        3 => EnumerablePoly::Phi3.poly().clone(),
        _ => Arc::new(Poly::phi(beta.into())),
    }
}

fn psi_context(beta: u32) -> Arc<Poly> {
    match beta {
        2 => EnumerablePoly::Psi2.poly().clone(),
        _ => Arc::new(Poly::psi(beta.into())),
    }
}

fn phi_components(beta: u32, x: &Mat2) -> (BigUint, BigUint) {
    let [a, b, c, d] = x.entries();
    let m = a * a + beta * a * b + b * b;
    let n = a * c + beta * b * c + b * d;
    (m, n)
}

fn psi_components(beta: u32, x: &Mat2) -> (BigUint, BigUint) {
    let [a, b, c, d] = x.entries();
    let (ac, bd) = (a * c, b * d);
    // Ties in ac = bd only happen at the identity.
    debug_assert!(ac != bd || x.is_identity());
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    let m = big * big + beta * a * b - small * small;
    let (big, small) = if ac >= bd { (&ac, &bd) } else { (&bd, &ac) };
    let n = big + beta * b * c - small;
    (m, n)
}

/// `(a^2 + beta ab + b^2, ac + beta bc + bd)`, a divisor pair of `x^2 + beta x + 1`.
pub fn phi_beta(beta: u32, x: &Mat2) -> DivisorPair {
    let (m, n) = phi_components(beta, x);
    DivisorPair::from_parts_unchecked(phi_context(beta), m, n)
}

/// `(max{a,b}^2 + beta ab - min{a,b}^2, max{ac,bd} + beta bc - min{ac,bd})`,
/// a divisor pair of `x^2 + beta x - 1`.
pub fn psi_beta(beta: u32, x: &Mat2) -> DivisorPair {
    let (m, n) = psi_components(beta, x);
    DivisorPair::from_parts_unchecked(psi_context(beta), m, n)
}

/// The equivariant map of `f` in closed form.
pub fn f_hat(f: EnumerablePoly, x: &Mat2) -> DivisorPair {
    match f {
        EnumerablePoly::Psi2 => psi_beta(2, x),
        _ => phi_beta(f.beta(), x),
    }
}

/// Applies `w` to `start` through the pair actions; the leftmost letter acts last.
pub fn apply_word(start: &DivisorPair, w: &GenWord) -> Result<DivisorPair> {
    w.letters()
        .iter()
        .rev()
        .try_fold(start.clone(), |p, g| match g {
            Gen::S => Ok(p.s_bar()),
            Gen::T => p.t_bar(),
        })
}

/// The equivariant map sending `I` to `(1, 0)` for any polynomial, computed by
/// replaying the word of `x`. Fails only if `f` vanishes along the way.
pub fn f_hat_by_replay(ctx: &Arc<Poly>, x: &Mat2) -> Result<DivisorPair> {
    apply_word(&DivisorPair::root(ctx.clone()), &x.to_word())
}

/// Output of the inverse algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseTrace {
    /// Exponents `alpha_0, alpha_1, ...` of the factored form
    /// `S^alpha_0 T^alpha_1 S^alpha_2 ...`.
    pub exponents: Vec<BigUint>,
    /// Every intermediate pair, from the input down to `(1, 0)`.
    pub pairs: Vec<DivisorPair>,
    pub word: GenWord,
    pub index: NodeIndex,
}

impl InverseTrace {
    pub fn matrix(&self) -> Mat2 {
        word_to_matrix(&self.word)
    }

    pub fn input(&self) -> &DivisorPair {
        &self.pairs[0]
    }
}

fn violation(p: &DivisorPair) -> Error {
    Error::ConditionViolated {
        poly: p.context().as_ref().clone(),
        m: p.m().clone(),
        n: p.n().clone(),
    }
}

/// Runs the inverse reduction on a pair of any polynomial.
///
/// The loop alternates `S^-q` with `q = floor(n / m)` and the complement
/// until `(1, 0)` is reached. Every state is checked against
/// `min(m, m') <= n < max(m, m')` with `m' = |f(n)| / m`; a failure means the
/// polynomial is not enumerable and is reported instead of looping.
pub fn invert(p: &DivisorPair) -> Result<InverseTrace> {
    let mut pairs = vec![p.clone()];
    let mut exponents = Vec::new();
    let mut cur = p.clone();

    if !cur.is_root() {
        let cof = cur.cofactor()?;
        let (lo, hi) = if cur.m() <= &cof {
            (cur.m(), &cof)
        } else {
            (&cof, cur.m())
        };
        if lo > cur.n() || cur.n() >= hi {
            return Err(violation(&cur));
        }
    }

    while !cur.is_root() {
        let q = cur.n() / cur.m();
        if !q.is_zero() {
            let n = cur.n() - &q * cur.m();
            cur = DivisorPair::from_parts_unchecked(cur.context().clone(), cur.m().clone(), n);
            pairs.push(cur.clone());
        }
        exponents.push(q);
        if cur.is_root() {
            break;
        }
        // Here n < m, so the complement must bring the first component to at most n.
        let cof = cur.cofactor()?;
        if &cof > cur.n() {
            return Err(violation(&cur));
        }
        cur = DivisorPair::from_parts_unchecked(cur.context().clone(), cof, cur.n().clone());
        pairs.push(cur.clone());
    }

    let blocks = exponents
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let g = if i % 2 == 0 { Gen::S } else { Gen::T };
            e.to_usize()
                .map(|e| (g, e))
                .ok_or_else(|| Error::Precondition(format!("exponent {e} too large for a word")))
        })
        .collect::<Result<Vec<_>>>()?;
    let word = GenWord::from_blocks(blocks);
    let index = word_to_index(&word);
    Ok(InverseTrace {
        exponents,
        pairs,
        word,
        index,
    })
}

/// Preimage of `p` under the map of `f`.
pub fn f_hat_inverse(f: EnumerablePoly, p: &DivisorPair) -> Result<InverseTrace> {
    p.ensure_same_context(&DivisorPair::root(f.poly().clone()))?;
    invert(p)
}

/// The pairs of all four enumerable polynomials attached to one matrix.
pub fn relatives(x: &Mat2) -> BTreeMap<EnumerablePoly, DivisorPair> {
    EnumerablePoly::ALL
        .into_iter()
        .map(|f| (f, f_hat(f, x)))
        .collect()
}

fn node_count(depth: u32) -> u128 {
    if depth >= 127 {
        u128::MAX
    } else {
        (1u128 << (depth + 1)) - 1
    }
}

pub(crate) fn check_budget(depth: u32, budget: u64) -> Result<()> {
    let requested = node_count(depth);
    if requested > budget as u128 {
        return Err(Error::BudgetExceeded { requested, budget });
    }
    Ok(())
}

const PARALLEL_ROW_LEN: usize = 1 << 12;

/// Lazy breadth-first rows of a divisor-pair tree.
#[derive(Debug, Clone)]
pub struct TreeRows {
    next: Option<Vec<DivisorPair>>,
    remaining: u32,
}

impl TreeRows {
    fn children(row: &[DivisorPair]) -> Vec<DivisorPair> {
        let expand = |p: &DivisorPair| {
            let t = p.t_bar().expect("enumerable polynomials do not vanish");
            [p.s_bar(), t]
        };
        if row.len() >= PARALLEL_ROW_LEN {
            row.par_iter().flat_map_iter(expand).collect()
        } else {
            row.iter().flat_map(expand).collect()
        }
    }
}

impl Iterator for TreeRows {
    type Item = Vec<DivisorPair>;

    fn next(&mut self) -> Option<Vec<DivisorPair>> {
        let row = self.next.take()?;
        if self.remaining > 0 {
            self.remaining -= 1;
            self.next = Some(Self::children(&row));
        }
        Some(row)
    }
}

/// Rows `0..=depth` of the tree of `f`; the left child is `s_bar`, the right `t_bar`.
pub fn tree_rows(f: EnumerablePoly, depth: u32, budget: u64) -> Result<TreeRows> {
    check_budget(depth, budget)?;
    Ok(TreeRows {
        next: Some(vec![DivisorPair::root(f.poly().clone())]),
        remaining: depth,
    })
}

/// Every tree node whose second component is at most `n_max`, with its index.
///
/// Second components strictly increase from parent to child, so the search
/// prunes whole subtrees.
pub fn nodes_up_to(f: EnumerablePoly, n_max: &BigUint) -> Vec<(NodeIndex, DivisorPair)> {
    let mut out = Vec::new();
    let mut stack = vec![(NodeIndex::root(), DivisorPair::root(f.poly().clone()))];
    while let Some((k, p)) = stack.pop() {
        if p.n() > n_max {
            continue;
        }
        let t = p.t_bar().expect("enumerable polynomials do not vanish");
        stack.push((k.child(Gen::T), t));
        stack.push((k.child(Gen::S), p.s_bar()));
        out.push((k, p));
    }
    out
}
