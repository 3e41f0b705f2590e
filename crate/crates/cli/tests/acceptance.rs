//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use enumtree::analytics::{
    prime_representation, ratio_closed_form, row_stats_direct, row_stats_recursive,
};
use enumtree::classify::{check_condition, composite_witness, scan_violations, Condition, Side};
use enumtree::factor::is_prime;
use enumtree::monoid::{index_to_word, matrix_to_word, word_to_index, word_to_matrix};
use enumtree::sequence::vector_tree_rows;
use enumtree::{
    relatives, tree_rows, DivisorPair, EnumerablePoly, Gen, GenWord, Mat2, NodeIndex, Poly,
    SSeqKernel, DEFAULT_NODE_BUDGET,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use EnumerablePoly::*;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_enumtree"))
        .args(args)
        .env_remove("ENUMTREE_MAX_NODES")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

fn divisor_count_by_trial(v: u64) -> usize {
    let mut count = 0;
    let mut d = 1u64;
    while d * d <= v {
        if v.is_multiple_of(d) {
            count += if d * d == v { 1 } else { 2 };
        }
        d += 1;
    }
    count
}

fn value(f: EnumerablePoly, n: u64) -> u64 {
    f.abs_eval(&BigUint::from(n)).to_u64().unwrap()
}

fn c1_sequence() -> Outcome {
    let (code, out) = bin(&["seq", "phi0", "--count", "15"]);
    ensure!(code == 0, "exit code {code}");
    let values: Vec<&str> = out
        .lines()
        .map(|l| l.split(' ').nth(1).unwrap_or(""))
        .collect();
    let expected = "0,1,1,2,3,3,2,3,7,8,5,5,8,7,3";
    ensure!(values.join(",") == expected, "got {}", values.join(","));
    Ok(())
}

fn c2_inverse() -> Outcome {
    let (code, out) = bin(&["inverse", "phi1", "37", "100"]);
    ensure!(code == 0, "exit code {code}");
    let field = |name: &str| {
        out.lines()
            .find_map(|l| l.strip_prefix(&format!("{name}: ")))
            .unwrap_or("")
            .to_string()
    };
    ensure!(field("word") == "SSTSST", "word {}", field("word"));
    ensure!(
        field("compact") == "S^2TS^2T",
        "compact {}",
        field("compact")
    );
    ensure!(
        field("matrix") == "[[3,4],[8,11]]",
        "matrix {}",
        field("matrix")
    );
    let chain =
        "(37, 100) -> (37, 26) -> (19, 26) -> (19, 7) -> (3, 7) -> (3, 1) -> (1, 1) -> (1, 0)";
    ensure!(field("chain") == chain, "chain {}", field("chain"));
    Ok(())
}

fn c3_relatives() -> Outcome {
    let x = Mat2::new(3u32, 4u32, 8u32, 11u32).map_err(|e| e.to_string())?;
    let rel = relatives(&x);
    for (f, m, n, cof) in [
        (Phi0, 25u64, 68u64, 185u64),
        (Psi2, 31, 84, 233),
        (Phi3, 61, 164, 449),
    ] {
        let p = &rel[&f];
        ensure!(p.has_components(m, n), "{f}: got {p}");
        let c = p.cofactor().map_err(|e| e.to_string())?;
        ensure!(c == BigUint::from(cof), "{f}: cofactor {c}");
        ensure!(value(f, n) == m * cof, "{f}: {m} * {cof} != |f({n})|");
    }
    ensure!(
        rel[&Phi1].has_components(37, 100),
        "phi1: got {}",
        rel[&Phi1]
    );
    Ok(())
}

fn c4_tau() -> Outcome {
    let mut mismatches = Vec::new();
    for f in EnumerablePoly::ALL {
        let kernel = SSeqKernel::new(f);
        for n in 0..=2000u64 {
            let size = kernel
                .fiber(&BigUint::from(n))
                .map_err(|e| e.to_string())?
                .len();
            let tau = divisor_count_by_trial(value(f, n));
            if size != tau {
                mismatches.push(format!("{f} n={n}: {size} vs {tau}"));
            }
        }
    }
    ensure!(
        mismatches.is_empty(),
        "{} mismatches, first {}",
        mismatches.len(),
        mismatches[0]
    );
    Ok(())
}

fn c5_primality() -> Outcome {
    let mut mismatches = Vec::new();
    for f in EnumerablePoly::ALL {
        let kernel = SSeqKernel::new(f);
        for n in 1..=2000u64 {
            let fiber = kernel.fiber(&BigUint::from(n)).map_err(|e| e.to_string())?;
            let boundary: BTreeSet<NodeIndex> =
                [BigUint::one() << n, (BigUint::one() << (n + 1)) - 1u32]
                    .into_iter()
                    .map(|k| NodeIndex::new(k).unwrap())
                    .collect();
            let v = value(f, n);
            let prime_by_trial = divisor_count_by_trial(v) == 2;
            let prime_by_test = is_prime(&BigUint::from(v));
            let by_fiber = fiber == boundary;
            if by_fiber != prime_by_trial || by_fiber != prime_by_test {
                mismatches.push(format!("{f} n={n}"));
            }
        }
    }
    ensure!(
        mismatches.is_empty(),
        "{} mismatches, first {}",
        mismatches.len(),
        mismatches[0]
    );
    Ok(())
}

fn c6_recursion_tree() -> Outcome {
    for f in EnumerablePoly::ALL {
        let kernel = SSeqKernel::new(f);
        let nodes: Vec<DivisorPair> = tree_rows(f, 15, DEFAULT_NODE_BUDGET)
            .map_err(|e| e.to_string())?
            .flatten()
            .collect();
        let prefix = kernel.s_prefix((1 << 15) - 1);
        for (k, s) in prefix.iter().enumerate() {
            ensure!(
                nodes[k].n() == s,
                "{f}: S({}) = {s}, tree {}",
                k + 1,
                nodes[k]
            );
        }
        for k in 1..=(1u64 << 15) {
            let p = kernel.pair_at(&NodeIndex::new(k).unwrap());
            ensure!(p == nodes[k as usize - 1], "{f}: pair_at({k}) = {p}");
        }
    }
    Ok(())
}

fn c7_vector_tree() -> Outcome {
    let vec_rows = vector_tree_rows(12, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let pair_rows = tree_rows(Phi0, 12, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let mut rows = 0;
    for (r, (vs, ps)) in vec_rows.zip(pair_rows).enumerate() {
        ensure!(vs.len() == ps.len(), "row {r} lengths differ");
        for (v, p) in vs.iter().zip(&ps) {
            let (m, n) = v.pair_components();
            ensure!(
                &m == p.m() && &n == p.n(),
                "row {r}: triple {v} vs pair {p}"
            );
        }
        rows += 1;
    }
    ensure!(rows == 13, "only {rows} rows");
    Ok(())
}

fn c8_row_sums() -> Outcome {
    let direct: Vec<_> = (0..=14)
        .map(|k| row_stats_direct(Phi0, k, DEFAULT_NODE_BUDGET))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for (k, d) in direct.iter().enumerate() {
        let k32 = k as u32;
        ensure!(
            row_stats_recursive(k32) == *d,
            "row {k}: recursion disagrees"
        );
        let closed = BigRational::new(
            BigInt::from(3) * ((BigInt::one() << k) - 1),
            BigInt::from(2),
        );
        ensure!(
            d.ratio_sum == closed && ratio_closed_form(k32) == closed,
            "row {k}: R = {}",
            d.ratio_sum
        );
        if k >= 2 {
            let m = |i: usize| BigInt::from(direct[i].m_sum.clone());
            let n = |i: usize| BigInt::from(direct[i].n_sum.clone());
            ensure!(m(k) == 5 * m(k - 1) - 2 * m(k - 2), "row {k}: M recursion");
            ensure!(n(k) == 5 * n(k - 1) - 2 * n(k - 2), "row {k}: N recursion");
        }
    }
    let gap = (direct[12].mean_ratio() - BigRational::new(3.into(), 2.into())).abs();
    ensure!(
        gap < BigRational::new(1.into(), 1000.into()),
        "R_12 / 2^12 is {gap} from 3/2"
    );
    Ok(())
}

fn c9_prime_reps() -> Outcome {
    let mut count = 0;
    for p in 2..=10_000u64 {
        if divisor_count_by_trial(p) != 2 {
            continue;
        }
        for n in (0..p).filter(|n| (n * n + 1) % p == 0) {
            let rep =
                prime_representation(Phi0, &p.into(), &n.into()).map_err(|e| e.to_string())?;
            ensure!(
                rep.product() == BigRational::from_integer(p.into()),
                "{rep}"
            );
            ensure!(
                rep.n_values.windows(2).all(|w| w[0] < w[1]),
                "{rep}: not increasing"
            );
            ensure!(
                rep.n_values.iter().all(|v| *v < BigUint::from(p)),
                "{rep}: not below p"
            );
            count += 1;
        }
    }
    ensure!(count > 1000, "only {count} representations");
    let p = BigUint::from(113u32);
    let rep = |n: u32| {
        prime_representation(Phi0, &p, &n.into())
            .unwrap()
            .to_string()
    };
    ensure!(rep(15) == "113 = (15^2 + 1)/(1^2 + 1)", "{}", rep(15));
    ensure!(
        rep(98) == "113 = (98^2 + 1)(1^2 + 1)/(13^2 + 1)",
        "{}",
        rep(98)
    );
    Ok(())
}

fn has(f: &Poly, n_max: u64, m: u64, n: u64, side: Side) -> Outcome {
    let report = scan_violations(f, n_max).map_err(|e| e.to_string())?;
    let found = report
        .violations
        .iter()
        .any(|v| v.m == BigUint::from(m) && v.n == BigUint::from(n) && v.side == side);
    ensure!(found, "{f}: no {side} violation at ({m}, {n})");
    Ok(())
}

fn c10_classification() -> Outcome {
    for f in EnumerablePoly::ALL {
        let report = scan_violations(f.poly(), 1000).map_err(|e| e.to_string())?;
        ensure!(
            report.is_clean(),
            "{f}: {} violations",
            report.violations.len()
        );
    }
    has(&Poly::new([1, 5, 1]), 10, 5, 3, Side::Left)?;
    has(&Poly::new([-1, 1, 1]), 5, 1, 1, Side::Right)?;
    for a in 1..=3i64 {
        let au = a as u64;
        has(&Poly::new([1, a]), 10, au + 1, au + 2, Side::Right)?;
    }
    for f in [Poly::new([1, 0, 2]), Poly::new([1, 0, 0, 1])] {
        let w = composite_witness(&f).map_err(|e| e.to_string())?;
        let v = f.eval(&BigInt::from(w.n0.clone()));
        ensure!(
            BigInt::from(&w.factor1 * &w.factor2) == v,
            "{f}: product mismatch"
        );
        ensure!(
            w.factor1 == &w.n0 + &w.a && w.factor2 == &w.n0 + &w.b,
            "{f}: factor shape"
        );
        ensure!(
            w.factor1 > w.n0 && w.factor2 > w.n0,
            "{f}: factors do not exceed n0"
        );
        let verdict = check_condition(&f, &w.factor1, &w.n0).map_err(|e| e.to_string())?;
        ensure!(
            matches!(verdict, Condition::Violated(ref c) if c.side == Side::Left),
            "{f}: witness not flagged"
        );
    }
    Ok(())
}

fn random_word(rng: &mut ChaCha8Rng) -> GenWord {
    let len = rng.gen_range(0..40);
    GenWord::new(
        (0..len)
            .map(|_| if rng.gen_bool(0.5) { Gen::S } else { Gen::T })
            .collect(),
    )
}

fn c11_monoid_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let s = Mat2::s();
    for i in 0..100_000 {
        let (wa, wb) = (random_word(&mut rng), random_word(&mut rng));
        let (a, b) = (word_to_matrix(&wa), word_to_matrix(&wb));
        ensure!(
            (&a * &b).complement() == &a.complement() * &b.complement(),
            "case {i}: c(AB)"
        );
        ensure!(
            &Mat2::t() * &a == (&s * &a.complement()).complement(),
            "case {i}: TA"
        );

        // Exactly one of S^-1 A and T^-1 A stays nonnegative, unless A = I.
        let [x, y, z, w] = a.entries();
        let s_prefix = z >= x && w >= y;
        let t_prefix = x >= z && y >= w;
        let expected = match wa.letters().first() {
            None => (false, false),
            Some(Gen::S) => (true, false),
            Some(Gen::T) => (false, true),
        };
        ensure!((s_prefix, t_prefix) == expected, "case {i}: prefix of {wa}");

        ensure!(
            matrix_to_word(&a) == wa,
            "case {i}: word round trip of {wa}"
        );
        let k = word_to_index(&wa);
        ensure!(
            index_to_word(&k) == wa,
            "case {i}: index round trip of {wa}"
        );
        ensure!(
            a.to_word().to_string().parse::<GenWord>().ok() == Some(wa.clone()),
            "case {i}: text"
        );
    }
    Ok(())
}

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 11] = [
        (1, "sequence fidelity", secs(1), c1_sequence),
        (2, "worked-example inverse", secs(1), c2_inverse),
        (3, "relatives of [[3,4],[8,11]]", secs(1), c3_relatives),
        (4, "fiber sizes equal tau, n <= 2000", secs(60), c4_tau),
        (
            5,
            "fiber primality criterion, n <= 2000",
            None,
            c5_primality,
        ),
        (6, "recursion and tree agree", secs(30), c6_recursion_tree),
        (
            7,
            "vector tree reproduces the x^2+1 tree",
            None,
            c7_vector_tree,
        ),
        (8, "row sums and ratio closed form", None, c8_row_sums),
        (
            9,
            "prime representations, p <= 10^4",
            secs(60),
            c9_prime_reps,
        ),
        (10, "classification witnesses", None, c10_classification),
        (
            11,
            "monoid laws, 10^5 random cases",
            secs(30),
            c11_monoid_laws,
        ),
    ];

    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| match limit {
            Some(l) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            _ => Ok(()),
        });
        match outcome {
            Ok(()) => println!("criterion {id:>2} PASS  {name} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 11 acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 11 acceptance criteria passed");
}
