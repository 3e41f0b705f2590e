//! Self-checks run by `enumtree verify`.

use std::collections::HashSet;

use enumtree::analytics::{
    prime_representation, primes_with_divisor, ratio_closed_form, roots_mod_p, row_stats_direct,
    row_stats_recursive,
};
use enumtree::classify::{scan_violations, Side};
use enumtree::factor::is_prime;
use enumtree::maps::nodes_up_to;
use enumtree::{
    f_hat_inverse, tree_rows, DivisorPair, EnumerablePoly, NodeIndex, Poly, SSeqKernel,
};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{CheckedSub, ToPrimitive};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Bijectivity,
    Tau,
    Primality,
    Recursions,
    Rowsums,
    Classification,
    PrimeReps,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Bijectivity => "bijectivity",
            Suite::Tau => "tau",
            Suite::Primality => "primality",
            Suite::Recursions => "recursions",
            Suite::Rowsums => "rowsums",
            Suite::Classification => "classification",
            Suite::PrimeReps => "prime-reps",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub suite: &'static str,
    pub bound: u64,
    pub checked: u64,
    pub failures: Vec<String>,
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

pub fn run(suite: Suite, bound: u64, budget: u64) -> Result<Summary, CliError> {
    let mut t = Tally::default();
    match suite {
        Suite::Bijectivity => bijectivity(&mut t, bound)?,
        Suite::Tau => tau(&mut t, bound)?,
        Suite::Primality => primality(&mut t, bound)?,
        Suite::Recursions => recursions(&mut t, depth(bound)?, budget)?,
        Suite::Rowsums => rowsums(&mut t, depth(bound)?, budget)?,
        Suite::Classification => classification(&mut t, bound)?,
        Suite::PrimeReps => prime_reps(&mut t, bound)?,
    }
    Ok(Summary {
        suite: suite.name(),
        bound,
        checked: t.checked,
        failures: t.failures,
    })
}

fn depth(bound: u64) -> Result<u32, CliError> {
    u32::try_from(bound).map_err(|_| CliError::Usage(format!("depth {bound} is too large")))
}

/// Divisors of `v` by trial division.
fn divisors_by_trial(v: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v.is_multiple_of(d) {
            small.push(d);
            if d * d != v {
                large.push(v / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn value_u64(f: EnumerablePoly, n: u64) -> Result<u64, CliError> {
    f.abs_eval(&BigUint::from(n))
        .to_u64()
        .ok_or_else(|| CliError::Usage(format!("bound {n} is too large for trial division")))
}

/// Every divisor pair with `n <= bound` is reached exactly once, and the
/// inverse returns the index it was found at.
fn bijectivity(t: &mut Tally, bound: u64) -> Result<(), CliError> {
    for f in EnumerablePoly::ALL {
        let nodes = nodes_up_to(f, &BigUint::from(bound));
        let mut seen = HashSet::new();
        for (k, p) in &nodes {
            t.check(seen.insert((p.m().clone(), p.n().clone())), || {
                format!("{f}: pair {p} appears twice")
            });
            let back = f_hat_inverse(f, p).map(|tr| tr.index);
            t.check(back.as_ref() == Ok(k), || {
                format!("{f}: inverse of {p} is not node {k}")
            });
        }
        for n in 0..=bound {
            for m in divisors_by_trial(value_u64(f, n)?) {
                let key = (BigUint::from(m), BigUint::from(n));
                t.check(seen.contains(&key), || {
                    format!("{f}: pair ({m}, {n}) is never reached")
                });
            }
        }
    }
    Ok(())
}

fn tau(t: &mut Tally, bound: u64) -> Result<(), CliError> {
    for f in EnumerablePoly::ALL {
        let kernel = SSeqKernel::new(f);
        for n in 0..=bound {
            let expected = divisors_by_trial(value_u64(f, n)?).len();
            let fiber = kernel.fiber(&BigUint::from(n))?;
            t.check(fiber.len() == expected, || {
                format!(
                    "{f}: fiber of {n} has {} indices, tau is {expected}",
                    fiber.len()
                )
            });
        }
    }
    Ok(())
}

fn primality(t: &mut Tally, bound: u64) -> Result<(), CliError> {
    for f in EnumerablePoly::ALL {
        let kernel = SSeqKernel::new(f);
        for n in 1..=bound {
            let value = value_u64(f, n)?;
            let by_trial = divisors_by_trial(value).len() == 2;
            let by_test = is_prime(&BigUint::from(value));
            let by_fiber = kernel.is_f_prime_via_fiber(&BigUint::from(n))?;
            t.check(by_trial == by_fiber && by_test == by_fiber, || {
                format!("{f}: n = {n}, trial {by_trial}, test {by_test}, fiber {by_fiber}")
            });
        }
    }
    Ok(())
}

fn recursions(t: &mut Tally, depth: u32, budget: u64) -> Result<(), CliError> {
    for f in EnumerablePoly::ALL {
        let kernel = SSeqKernel::new(f);
        let nodes: Vec<DivisorPair> = tree_rows(f, depth, budget)?.flatten().collect();
        let prefix = kernel.s_prefix(nodes.len());
        for (i, (p, s)) in nodes.iter().zip(&prefix).enumerate() {
            let k = i as u64 + 1;
            t.check(p.n() == s, || {
                format!("{f}: S({k}) = {s}, tree has {}", p.n())
            });
            let at = kernel.pair_at(&NodeIndex::new(k)?);
            t.check(&at == p, || {
                format!("{f}: pair_at({k}) = {at}, tree has {p}")
            });
        }
        // Each section S(4k + r) against the stated linear combination.
        let c = BigUint::from(kernel.constant());
        let start = kernel.recursion_start();
        for k in start..(nodes.len() as u64 / 4) {
            let s = |i: u64| &prefix[(i - 1) as usize];
            let (a, b, d) = (s(k), s(2 * k), s(2 * k + 1));
            let sections = [
                (4 * k, (2u32 * b).checked_sub(a)),
                (4 * k + 1, Some(2u32 * b + d + &c)),
                (4 * k + 2, Some(2u32 * d + b + &c)),
                (4 * k + 3, (2u32 * d).checked_sub(a)),
            ];
            for (i, expected) in sections {
                t.check(expected.as_ref() == Some(s(i)), || {
                    format!("{f}: S({i}) = {} breaks the recursion", s(i))
                });
            }
        }
    }
    Ok(())
}

fn rowsums(t: &mut Tally, depth: u32, budget: u64) -> Result<(), CliError> {
    for k in 0..=depth {
        let direct = row_stats_direct(EnumerablePoly::Phi0, k, budget)?;
        let recursive = row_stats_recursive(k);
        t.check(direct == recursive, || {
            format!("row {k}: direct {direct:?} differs from recursive {recursive:?}")
        });
        let closed = ratio_closed_form(k);
        t.check(direct.ratio_sum == closed, || {
            format!("row {k}: R = {}, closed form {closed}", direct.ratio_sum)
        });
    }
    Ok(())
}

fn classification(t: &mut Tally, bound: u64) -> Result<(), CliError> {
    for f in EnumerablePoly::ALL {
        for g in [(**f.poly()).clone(), f.poly().negated()] {
            let report = scan_violations(&g, bound)?;
            t.check(report.is_clean(), || {
                format!("{g}: {} violations up to {bound}", report.violations.len())
            });
        }
    }
    let mut expect = |coeffs: &[i64], m: u64, n: u64, side: Side| -> Result<(), CliError> {
        if n > bound {
            return Ok(());
        }
        let g = Poly::new(coeffs.iter().copied());
        let report = scan_violations(&g, bound)?;
        let found = report
            .violations
            .iter()
            .any(|v| v.side == side && v.m == BigUint::from(m) && v.n == BigUint::from(n));
        t.check(found, || {
            format!("{g}: expected a {side} violation at ({m}, {n})")
        });
        Ok(())
    };
    expect(&[1, 5, 1], 5, 3, Side::Left)?;
    expect(&[-1, 1, 1], 1, 1, Side::Right)?;
    expect(&[1, -4, 1], 1, 4, Side::Right)?;
    for a in 1..=3u64 {
        expect(&[1, a as i64], a + 1, a + 2, Side::Right)?;
    }
    Ok(())
}

fn prime_reps(t: &mut Tally, bound: u64) -> Result<(), CliError> {
    for f in EnumerablePoly::ALL {
        for p in primes_with_divisor(f, bound) {
            for n in roots_mod_p(f, p)? {
                let rep = prime_representation(f, &BigUint::from(p), &BigUint::from(n))?;
                let exact = rep.product() == BigRational::from_integer(p.into());
                let increasing = rep.n_values.windows(2).all(|w| w[0] < w[1])
                    && rep.n_values.iter().all(|v| *v < BigUint::from(p));
                t.check(exact && increasing, || {
                    format!("{f}: bad representation {rep}")
                });
            }
        }
    }
    Ok(())
}
