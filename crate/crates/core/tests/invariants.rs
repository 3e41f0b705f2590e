use std::collections::HashSet;

use enumtree::classify::{check_condition, composite_witness, scan_violations, Condition, Side};
use enumtree::monoid::word_to_matrix;
use enumtree::sequence::net_expand;
use enumtree::{
    f_hat, f_hat_inverse, tree_rows, EnumerablePoly, Error, Gen, GenWord, Mat2, NodeIndex, Poly,
    SSeqKernel, DEFAULT_NODE_BUDGET,
};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use EnumerablePoly::*;

fn enumerable() -> impl Strategy<Value = EnumerablePoly> {
    prop_oneof![Just(Phi0), Just(Phi1), Just(Psi2), Just(Phi3)]
}

fn matrix() -> impl Strategy<Value = Mat2> {
    prop::collection::vec(prop::bool::ANY, 0..48).prop_map(|bits| {
        let letters = bits
            .into_iter()
            .map(|b| if b { Gen::S } else { Gen::T })
            .collect();
        word_to_matrix(&GenWord::new(letters))
    })
}

#[test]
fn boundary_terms_for_every_kernel() {
    for f in EnumerablePoly::ALL {
        let kernel = SSeqKernel::new(f);
        for n in 0..=20u32 {
            let left = NodeIndex::new(BigUint::from(1u32) << n).unwrap();
            let right = NodeIndex::new((BigUint::from(1u32) << (n + 1)) - 1u32).unwrap();
            assert_eq!(kernel.s_value(&left), BigUint::from(n), "{f}");
            assert_eq!(kernel.s_value(&right), BigUint::from(n), "{f}");
        }
    }
}

#[test]
fn sections_are_linear_in_the_three_previous_terms() {
    for f in EnumerablePoly::ALL {
        let kernel = SSeqKernel::new(f);
        let s: Vec<BigInt> = kernel
            .s_prefix((1 << 16) + 4)
            .into_iter()
            .map(BigInt::from)
            .collect();
        let at = |k: usize| &s[k - 1];
        let c = kernel.constant();
        for k in kernel.recursion_start() as usize..=(1 << 14) {
            let expected = net_expand(at(k), at(2 * k), at(2 * k + 1), c);
            let actual = [at(4 * k), at(4 * k + 1), at(4 * k + 2), at(4 * k + 3)];
            assert_eq!(
                expected.iter().collect::<Vec<_>>(),
                actual,
                "{f} at k = {k}"
            );
        }
    }
}

#[test]
fn tree_nodes_are_distinct_and_invert_to_their_index() {
    for f in EnumerablePoly::ALL {
        let mut seen = HashSet::new();
        let mut k = 1u64;
        for row in tree_rows(f, 12, DEFAULT_NODE_BUDGET).unwrap() {
            for p in row {
                assert!(
                    seen.insert((p.m().clone(), p.n().clone())),
                    "{f}: {p} repeats"
                );
                let trace = f_hat_inverse(f, &p).unwrap();
                assert_eq!(trace.index, NodeIndex::new(k).unwrap());
                assert_eq!(f_hat(f, &trace.matrix()), p);
                k += 1;
            }
        }
    }
}

#[test]
fn enumerable_polynomials_and_their_negatives_pass_the_criterion() {
    for f in EnumerablePoly::ALL {
        assert!(scan_violations(f.poly(), 400).unwrap().is_clean());
        assert!(scan_violations(&f.poly().negated(), 400)
            .unwrap()
            .is_clean());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn maps_are_equivariant(f in enumerable(), a in matrix()) {
        let image = f_hat(f, &a);
        prop_assert_eq!(f_hat(f, &(&Mat2::s() * &a)), image.s_bar());
        prop_assert_eq!(f_hat(f, &(&Mat2::t() * &a)), image.t_bar().unwrap());
    }

    #[test]
    fn inverse_undoes_the_map(f in enumerable(), a in matrix()) {
        let trace = f_hat_inverse(f, &f_hat(f, &a)).unwrap();
        prop_assert_eq!(trace.matrix(), a.clone());
        prop_assert_eq!(trace.index, a.index());
    }

    #[test]
    fn sequence_reads_off_second_components(f in enumerable(), k in 1u64..1 << 40) {
        let kernel = SSeqKernel::new(f);
        let k = NodeIndex::new(k).unwrap();
        let p = kernel.pair_at(&k);
        prop_assert_eq!(p.n(), &kernel.s_value(&k));
        prop_assert_eq!(f_hat_inverse(f, &p).unwrap().index, k);
    }

    #[test]
    fn criterion_ignores_sign(c in prop::collection::vec(-6i64..=6, 2..5), n_max in 0u64..40) {
        let f = Poly::new(c);
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let strip = |p: &Poly| match scan_violations(p, n_max) {
            Ok(r) => Ok(r.violations.into_iter().map(|v| (v.m, v.n, v.side)).collect::<Vec<_>>()),
            Err(Error::Vanishing { n, .. }) => Err(n),
            Err(e) => panic!("{e}"),
        };
        prop_assert_eq!(strip(&f), strip(&f.negated()));
    }

    #[test]
    fn composite_witnesses_verify(c in prop::collection::vec(-9i64..=9, 3), lead in 1i64..4) {
        let mut coeffs = c;
        coeffs.push(lead);
        let f = Poly::new(coeffs);
        let w = composite_witness(&f).unwrap();
        let value = f.eval(&BigInt::from(w.n0.clone()));
        prop_assert_eq!(BigInt::from(&w.factor1 * &w.factor2), value);
        prop_assert!(w.factor1 > w.n0 && w.factor2 > w.n0);
        match check_condition(&f, &w.factor1, &w.n0).unwrap() {
            Condition::Violated(c) => prop_assert_eq!(c.side, Side::Left),
            Condition::Holds => prop_assert!(false, "witness passes"),
        }
    }
}
