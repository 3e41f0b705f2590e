//! The enumerability criterion for arbitrary integer polynomials.
//!
//! `f` is enumerable exactly when every divisor pair other than `(1, 0)`
//! satisfies `min(m, m') <= n < max(m, m')` with `m' = |f(n)| / m`. The
//! checks here look for pairs that break it, and build the explicit
//! counterexample used to rule out high-degree polynomials.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::{factorize, FactorLimits};
use crate::pairs::pair_in_df;
use crate::poly::Poly;

/// Which half of the criterion fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `min(m, m') > n`: the map misses the pair.
    Left,
    /// `n >= max(m, m')`: the map hits the pair twice.
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "LEFT",
            Side::Right => "RIGHT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationCertificate {
    pub poly: Poly,
    pub m: BigUint,
    pub n: BigUint,
    pub cofactor: BigUint,
    pub side: Side,
}

impl ViolationCertificate {
    /// The failed inequality with numbers filled in.
    pub fn detail(&self) -> String {
        let (lo, hi) = if self.m <= self.cofactor {
            (&self.m, &self.cofactor)
        } else {
            (&self.cofactor, &self.m)
        };
        match self.side {
            Side::Left => format!("min({}, {}) = {} > {}", self.m, self.cofactor, lo, self.n),
            Side::Right => format!("{} >= max({}, {}) = {}", self.n, self.m, self.cofactor, hi),
        }
    }
}

impl fmt::Display for ViolationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violation at ({}, {}) for {}: {}",
            self.side,
            self.m,
            self.n,
            self.poly,
            self.detail()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Holds,
    Violated(ViolationCertificate),
}

fn vanishing(f: &Poly, n: &BigUint) -> Error {
    Error::Vanishing {
        poly: f.clone(),
        n: BigInt::from(n.clone()),
    }
}

/// Tests one pair against the criterion.
pub fn check_condition(f: &Poly, m: &BigUint, n: &BigUint) -> Result<Condition> {
    if !pair_in_df(f, &BigInt::from(m.clone()), &BigInt::from(n.clone())) {
        return Err(Error::NotDivisorPair {
            poly: f.clone(),
            m: m.clone(),
            n: n.clone(),
        });
    }
    if m.is_one() && n.is_zero() {
        return Err(Error::Precondition(
            "(1, 0) is the image of the identity and is not tested".into(),
        ));
    }
    let value = f.abs_eval(n);
    if value.is_zero() {
        return Err(vanishing(f, n));
    }
    Ok(classify_pair(f, m, n, &value))
}

fn classify_pair(f: &Poly, m: &BigUint, n: &BigUint, value: &BigUint) -> Condition {
    let cofactor = value / m;
    let (lo, hi) = if m <= &cofactor {
        (m, &cofactor)
    } else {
        (&cofactor, m)
    };
    let side = if lo > n {
        Side::Left
    } else if n >= hi {
        Side::Right
    } else {
        return Condition::Holds;
    };
    Condition::Violated(ViolationCertificate {
        poly: f.clone(),
        m: m.clone(),
        n: n.clone(),
        cofactor,
        side,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScanReport {
    /// Ordered by `(n, m)`.
    pub violations: Vec<ViolationCertificate>,
    /// Arguments whose value could not be fully factored; their pairs were
    /// not checked.
    pub incomplete: Vec<BigUint>,
}

impl ScanReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.incomplete.is_empty()
    }

    pub fn side(&self, side: Side) -> impl Iterator<Item = &ViolationCertificate> {
        self.violations.iter().filter(move |v| v.side == side)
    }
}

enum Row {
    Checked(Vec<ViolationCertificate>),
    Incomplete(BigUint),
}

fn scan_row(f: &Poly, n: u64, limits: &FactorLimits) -> Result<Row> {
    let n = BigUint::from(n);
    let value = f.abs_eval(&n);
    if value.is_zero() {
        return Err(vanishing(f, &n));
    }
    let Some(divisors) = factorize(&value, limits).divisors() else {
        return Ok(Row::Incomplete(n));
    };
    let mut out = Vec::new();
    for m in divisors {
        if m.is_one() && n.is_zero() {
            continue;
        }
        if let Condition::Violated(cert) = classify_pair(f, &m, &n, &value) {
            out.push(cert);
        }
    }
    Ok(Row::Checked(out))
}

/// Every violating pair with `n <= n_max`.
///
/// A root of `f` in range is an error naming the smallest such root.
pub fn scan_violations_with(f: &Poly, n_max: u64, limits: &FactorLimits) -> Result<ScanReport> {
    let rows: Vec<Result<Row>> = (0..=n_max)
        .into_par_iter()
        .map(|n| scan_row(f, n, limits))
        .collect();
    let mut report = ScanReport::default();
    for row in rows {
        match row? {
            Row::Checked(v) => report.violations.extend(v),
            Row::Incomplete(n) => report.incomplete.push(n),
        }
    }
    Ok(report)
}

pub fn scan_violations(f: &Poly, n_max: u64) -> Result<ScanReport> {
    scan_violations_with(f, n_max, &FactorLimits::default())
}

/// The scan split by the two halves of the criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapReport {
    /// No pair up to the bound is reached twice.
    pub injective_up_to: bool,
    /// No pair up to the bound is missed.
    pub surjective_up_to: bool,
    pub injectivity_witnesses: Vec<ViolationCertificate>,
    pub surjectivity_witnesses: Vec<ViolationCertificate>,
    pub incomplete: Vec<BigUint>,
}

pub fn injectivity_surjectivity_report(f: &Poly, n_max: u64) -> Result<MapReport> {
    let scan = scan_violations(f, n_max)?;
    let injectivity_witnesses: Vec<_> = scan.side(Side::Right).cloned().collect();
    let surjectivity_witnesses: Vec<_> = scan.side(Side::Left).cloned().collect();
    Ok(MapReport {
        injective_up_to: injectivity_witnesses.is_empty(),
        surjective_up_to: surjectivity_witnesses.is_empty(),
        injectivity_witnesses,
        surjectivity_witnesses,
        incomplete: scan.incomplete,
    })
}

/// A factorization `f(n0) = (n0 + a)(n0 + b)` with `a, b >= 1`, so the pair
/// `(n0 + a, n0)` breaks the left inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeWitness {
    pub a: BigUint,
    pub n0: BigUint,
    pub factor1: BigUint,
    pub factor2: BigUint,
    pub b: BigUint,
}

/// Largest argument checked one by one when certifying `2 f(n) > 3 n^2`.
const GROWTH_CHECK_LIMIT: u64 = 10_000_000;
/// Largest `a` tried.
const WITNESS_SEARCH_LIMIT: u64 = 1_000_000;

/// Smallest integer above every real root of `g` (Cauchy's bound).
fn cauchy_bound(g: &Poly) -> BigInt {
    let lead = g.leading_coeff().expect("nonzero polynomial").abs();
    let max = g.coeffs()[..g.coeffs().len() - 1]
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_default();
    BigInt::one() + (max + &lead - 1) / lead
}

/// `2 f - 3 x^2`, positive exactly where `f(n) > 3/2 n^2`.
fn growth_margin(f: &Poly) -> Poly {
    let mut coeffs: Vec<BigInt> = f.coeffs().iter().map(|c| 2 * c).collect();
    coeffs.resize(coeffs.len().max(3), BigInt::zero());
    coeffs[2] -= 3;
    Poly::new(coeffs)
}

/// Builds the left-side counterexample for polynomials that grow faster than
/// `3/2 n^2`.
///
/// Searches `a = 1, 2, ...` for the first value with `|f(-a)| > 3a` and
/// `f(n) > 3/2 n^2` for every `n > 2a`; then `n0 = |f(-a)| - a` works
/// because `f(n0)` is a multiple of `f(-a)`.
pub fn composite_witness(f: &Poly) -> Result<CompositeWitness> {
    let lead = f
        .leading_coeff()
        .ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    let degree = f.degree().unwrap_or(0);
    if !lead.is_positive() {
        return Err(Error::Precondition(format!(
            "{f} needs a positive leading coefficient"
        )));
    }
    if degree < 2 || (degree == 2 && *lead < BigInt::from(2)) {
        return Err(Error::Precondition(format!(
            "{f} needs degree at least 3, or degree 2 with leading coefficient at least 2"
        )));
    }

    // Past the bound g is positive; below it every integer is checked once.
    let g = growth_margin(f);
    let bound = cauchy_bound(&g)
        .to_u64()
        .filter(|b| *b <= GROWTH_CHECK_LIMIT)
        .ok_or_else(|| {
            Error::Precondition(format!(
                "coefficients of {f} are too large to certify growth"
            ))
        })?;
    let last_bad = (0..bound)
        .rev()
        .find(|&n| !g.eval(&BigInt::from(n)).is_positive());

    for a in 1..=WITNESS_SEARCH_LIMIT {
        let growth_ok = last_bad.is_none_or(|bad| bad <= 2 * a);
        let at_minus_a = f.eval(&-BigInt::from(a)).abs();
        if !growth_ok || at_minus_a <= BigInt::from(3 * a) {
            continue;
        }
        let a_big = BigInt::from(a);
        let n0 = &at_minus_a - &a_big;
        let value = f.eval(&n0);
        let factor1 = &n0 + &a_big;
        if !(&value % &factor1).is_zero() {
            return Err(Error::Precondition(format!(
                "{factor1} does not divide f({n0}); witness construction failed"
            )));
        }
        let factor2 = &value / &factor1;
        let b = &factor2 - &n0;
        if !b.is_positive() {
            return Err(Error::Precondition(format!(
                "cofactor {factor2} does not exceed {n0}; witness construction failed"
            )));
        }
        let to_u = |x: BigInt| x.to_biguint().expect("positive by construction");
        return Ok(CompositeWitness {
            a: BigUint::from(a),
            n0: to_u(n0),
            factor1: to_u(factor1),
            factor2: to_u(factor2),
            b: to_u(b),
        });
    }
    Err(Error::Precondition(format!(
        "no witness for {f} with a <= {WITNESS_SEARCH_LIMIT}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::EnumerablePoly;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn poly(c: &[i64]) -> Poly {
        Poly::new(c.iter().copied())
    }

    fn has(report: &ScanReport, m: u64, n: u64, side: Side) -> bool {
        report
            .violations
            .iter()
            .any(|v| v.m == u(m) && v.n == u(n) && v.side == side)
    }

    #[test]
    fn single_pairs() {
        let five = poly(&[1, 5, 1]);
        match check_condition(&five, &u(5), &u(3)).unwrap() {
            Condition::Violated(c) => {
                assert_eq!(c.side, Side::Left);
                assert_eq!(c.detail(), "min(5, 5) = 5 > 3");
            }
            Condition::Holds => panic!("expected a violation"),
        }
        let phi0 = EnumerablePoly::Phi0.poly();
        assert_eq!(
            check_condition(phi0, &u(2), &u(3)).unwrap(),
            Condition::Holds
        );
        assert_eq!(
            check_condition(phi0, &u(1), &u(1)).unwrap(),
            Condition::Holds
        );
        match check_condition(&poly(&[1, 3]), &u(4), &u(5)).unwrap() {
            Condition::Violated(c) => assert_eq!(c.side, Side::Right),
            Condition::Holds => panic!("expected a violation"),
        }
    }

    #[test]
    fn single_pair_preconditions() {
        let phi0 = EnumerablePoly::Phi0.poly();
        assert!(matches!(
            check_condition(phi0, &u(3), &u(1)),
            Err(Error::NotDivisorPair { .. })
        ));
        assert!(matches!(
            check_condition(phi0, &u(1), &u(0)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_condition(&poly(&[-1, 1]), &u(4), &u(1)),
            Err(Error::Vanishing { .. })
        ));
    }

    #[test]
    fn enumerable_polynomials_scan_clean() {
        for f in EnumerablePoly::ALL {
            assert!(scan_violations(f.poly(), 1000).unwrap().is_clean(), "{f}");
            assert!(
                scan_violations(&f.poly().negated(), 300)
                    .unwrap()
                    .is_clean(),
                "-{f}"
            );
        }
    }

    #[test]
    fn known_counterexamples() {
        assert!(has(
            &scan_violations(&poly(&[1, 5, 1]), 10).unwrap(),
            5,
            3,
            Side::Left
        ));
        assert!(has(
            &scan_violations(&poly(&[-1, 1, 1]), 5).unwrap(),
            1,
            1,
            Side::Right
        ));
        assert!(has(
            &scan_violations(&poly(&[1, -4, 1]), 5).unwrap(),
            1,
            4,
            Side::Right
        ));
        for a in 1..=3 {
            let report = scan_violations(&poly(&[1, a]), 10).unwrap();
            let a = a as u64;
            assert!(has(&report, a + 1, a + 2, Side::Right), "a = {a}");
        }
    }

    #[test]
    fn vanishing_is_reported_at_its_root() {
        let err = scan_violations(&poly(&[-1, 1]), 5).unwrap_err();
        assert_eq!(
            err,
            Error::Vanishing {
                poly: poly(&[-1, 1]),
                n: BigInt::from(1)
            }
        );
        let err = scan_violations(&poly(&[-4, 0, 1]), 9).unwrap_err();
        assert!(matches!(err, Error::Vanishing { n, .. } if n == BigInt::from(2)));
    }

    #[test]
    fn violations_are_ordered() {
        let report = scan_violations(&poly(&[1, 1]), 40).unwrap();
        let keys: Vec<_> = report
            .violations
            .iter()
            .map(|v| (v.n.clone(), v.m.clone()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn other_monic_quadratics_fail() {
        let enumerable: Vec<Poly> = EnumerablePoly::ALL
            .iter()
            .map(|e| (**e.poly()).clone())
            .collect();
        for b in 0..=20i64 {
            for c in [1, -1] {
                let f = poly(&[c, b, 1]);
                if enumerable.contains(&f) {
                    continue;
                }
                let n_max = (b * b).max(1) as u64;
                match scan_violations(&f, n_max) {
                    Ok(report) => assert!(!report.violations.is_empty(), "{f}"),
                    Err(Error::Vanishing { .. }) => {}
                    Err(e) => panic!("{f}: {e}"),
                }
            }
        }
    }

    #[test]
    fn sign_does_not_matter() {
        for f in [
            poly(&[1, 5, 1]),
            poly(&[1, 2]),
            poly(&[3, 0, 2]),
            poly(&[-1, 1, 1]),
        ] {
            let strip = |r: ScanReport| -> Vec<_> {
                r.violations
                    .into_iter()
                    .map(|v| (v.m, v.n, v.cofactor, v.side))
                    .collect()
            };
            assert_eq!(
                strip(scan_violations(&f, 60).unwrap()),
                strip(scan_violations(&f.negated(), 60).unwrap())
            );
        }
    }

    #[test]
    fn small_values_are_prime() {
        use crate::factor::is_prime;
        for f in EnumerablePoly::ALL {
            let v1 = f.abs_eval(&u(1));
            let v2 = f.abs_eval(&u(2));
            let v3 = f.abs_eval(&v1);
            for v in [v1, v2, v3] {
                assert!(is_prime(&v), "{f}: {v}");
            }
        }
    }

    #[test]
    fn map_report() {
        let r = injectivity_surjectivity_report(EnumerablePoly::Phi0.poly(), 500).unwrap();
        assert!(r.injective_up_to && r.surjective_up_to);
        let r = injectivity_surjectivity_report(&poly(&[1, 5, 1]), 10).unwrap();
        assert!(!r.surjective_up_to);
        assert!(r
            .surjectivity_witnesses
            .iter()
            .any(|v| v.m == u(5) && v.n == u(3)));
        let r = injectivity_surjectivity_report(&poly(&[1, 1]), 10).unwrap();
        assert!(!r.injective_up_to);
        assert!(r
            .injectivity_witnesses
            .iter()
            .any(|v| v.m == u(2) && v.n == u(3)));
    }

    fn assert_witness(f: &Poly, w: &CompositeWitness) {
        let n0 = BigInt::from(w.n0.clone());
        let value = f.eval(&n0).to_biguint().unwrap();
        assert_eq!(&w.factor1 * &w.factor2, value);
        assert_eq!(w.factor1, &w.n0 + &w.a);
        assert_eq!(w.factor2, &w.n0 + &w.b);
        assert!(w.b >= u(1));
        match check_condition(f, &w.factor1, &w.n0).unwrap() {
            Condition::Violated(c) => assert_eq!(c.side, Side::Left),
            Condition::Holds => panic!("witness for {f} passes the criterion"),
        }
    }

    #[test]
    fn witnesses() {
        let f = poly(&[1, 0, 2]);
        let w = composite_witness(&f).unwrap();
        assert_eq!(
            (
                w.a.clone(),
                w.n0.clone(),
                w.factor1.clone(),
                w.factor2.clone()
            ),
            (u(2), u(7), u(9), u(11))
        );
        assert_witness(&f, &w);

        let f = poly(&[1, 0, 0, 1]);
        let w = composite_witness(&f).unwrap();
        assert_eq!(
            (
                w.a.clone(),
                w.n0.clone(),
                w.factor1.clone(),
                w.factor2.clone()
            ),
            (u(2), u(5), u(7), u(18))
        );
        assert_witness(&f, &w);

        for f in [
            poly(&[-7, 0, 3]),
            poly(&[5, -9, 0, 1]),
            poly(&[0, 0, 0, 0, 1]),
            poly(&[-40, 3, 2]),
        ] {
            let w = composite_witness(&f).unwrap();
            assert_witness(&f, &w);
        }
    }

    #[test]
    fn witness_preconditions() {
        for f in [
            (**EnumerablePoly::Phi0.poly()).clone(),
            poly(&[1, 3]),
            poly(&[1, 0, 0, -1]),
            poly(&[]),
        ] {
            assert!(
                matches!(composite_witness(&f), Err(Error::Precondition(_))),
                "{f}"
            );
        }
    }

    #[test]
    fn growth_bound_is_sound() {
        let f = poly(&[-40, 3, 2]);
        let g = growth_margin(&f);
        let bound = cauchy_bound(&g).to_i64().unwrap();
        for n in bound..bound + 500 {
            assert!(g.eval(&BigInt::from(n)).is_positive());
        }
    }
}
