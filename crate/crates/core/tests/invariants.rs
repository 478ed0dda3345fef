use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyform::algebra::{find_prime_in_dyadic_interval, Monomial, SparsePolynomial};
use polyform::bits::full;
use polyform::circuits::{expand, homogenize, sum_of_products_circuit, verify_circuit};
use polyform::formulations::{formulate, Params, Problem};
use polyform::pipeline::{prime_exponent, PrimePolicy};
use polyform::reference as oracle;
use polyform::solvers::{for_each_spanning_tree, ProblemInstance};
use polyform::splitters::{build_code_splitter, build_interval_splitter};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_and_expansion_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let nvars = r.gen_range(1..=3);
        let gates = r.gen_range(1..=12);
        let c = oracle::random_circuit(&mut r, nvars, gates, 4);
        let p = find_prime_in_dyadic_interval(20).unwrap();
        let c = c.with_modulus(p).unwrap();
        let f = &expand(&c, 4).unwrap()[0];
        let point: Vec<BigInt> = (0..nvars).map(|_| BigInt::from(r.gen_range(-30i64..30))).collect();
        prop_assert_eq!(f.eval(&point).unwrap(), c.evaluate(&point).unwrap()[0].clone());
    }

    #[test]
    fn homogenized_gates_are_homogeneous(seed in any::<u64>(), delta in 0u32..=3) {
        let mut r = rng(seed);
        let gates = r.gen_range(1..=10);
        let c = oracle::random_circuit(&mut r, 2, gates, 6);
        let h = homogenize(&c, delta).unwrap();
        let p = find_prime_in_dyadic_interval(30).unwrap();
        let every: Vec<usize> = (0..h.base.gates().len()).collect();
        let all = polyform::circuits::ArithmeticCircuit::new(2, Some(p), h.base.gates().to_vec(), every).unwrap();
        for (g, f) in expand(&all, delta).unwrap().iter().enumerate() {
            prop_assert!(f.is_zero() || f.is_homogeneous_of_degree(h.degree_of[g]), "gate {}", g);
        }
    }

    #[test]
    fn sum_of_products_verifies_and_perturbation_rejects(
        terms in proptest::collection::vec((proptest::collection::vec(0u32..3, 0..=3), 1u64..16), 1..6),
        bump in 1u64..16,
    ) {
        let p = find_prime_in_dyadic_interval(3).unwrap();
        let build = |extra: u64| {
            let mut list: Vec<(Monomial, BigInt)> = terms
                .iter()
                .map(|(vars, c)| (Monomial::from_vars(vars.iter().copied()), BigInt::from(*c)))
                .collect();
            list.push((Monomial::one(), BigInt::from(extra)));
            SparsePolynomial::from_terms(3, 3, Some(p), list).unwrap()
        };
        let target = build(0);
        let c = sum_of_products_circuit(&target);
        prop_assert!(verify_circuit(&c, &target, 3, p).unwrap().is_accept());
        if bump % p.value() != 0 {
            prop_assert!(!verify_circuit(&c, &build(bump), 3, p).unwrap().is_accept());
        }
    }

    #[test]
    fn spanning_trees_split_into_internal_and_leaves(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=6);
        let g = oracle::random_graph(&mut r, n, 0.6, false);
        let mut trees = 0;
        for_each_spanning_tree(&g, full(n), &mut |deg| {
            let leaves = deg.iter().filter(|&&d| d == 1).count();
            let internal = deg.iter().filter(|&&d| d > 1).count();
            assert_eq!(leaves + internal, n);
            trees += 1;
        }).unwrap();
        prop_assert_eq!(trees > 0, g.is_connected());
    }

    #[test]
    fn mod_p_decisions_match_integer_decisions(seed in any::<u64>(), t in 0usize..=5) {
        let out = formulate(Problem::IndependentSet, &Params::new(5, 2).with("t", t).unwrap()).unwrap();
        let e = prime_exponent(PrimePolicy::Count, out.monomials(), out.s()).unwrap();
        let p = find_prime_in_dyadic_interval(e).unwrap();
        let reduced = out.poly.reduce_mod(p);
        let g = oracle::random_graph(&mut rng(seed), 5, 0.5, false);
        let x = out.assign(&ProblemInstance::Graph(g).into()).unwrap();
        let exact = out.evaluate(&x).unwrap();
        prop_assert!(exact.clone() * 2 < BigInt::from(p.value()));
        prop_assert_eq!(reduced.eval_binary(&x).unwrap(), exact);
    }
}

#[test]
fn legends_are_bijections() {
    let cases = [
        (Problem::HamPath, Params::new(5, 2)),
        (Problem::Coloring, Params::new(4, 2).with("t", 2).unwrap()),
        (
            Problem::KVertexCover,
            Params::new(6, 3).with("k", 2).unwrap(),
        ),
        (Problem::KPath, Params::new(7, 2).with("k", 3).unwrap()),
    ];
    for (problem, params) in cases {
        let out = formulate(problem, &params).unwrap();
        let legend = out.layout.legend();
        let distinct: HashSet<_> = legend.keys().iter().collect();
        assert_eq!(distinct.len(), legend.len(), "{problem}");
        for (i, key) in legend.keys().iter().enumerate() {
            assert_eq!(legend.get(key), Some(i as u32), "{problem} {key}");
        }
        assert!(out.poly.terms().iter().all(|(_, c)| c.is_one()));
    }
}

#[test]
fn splitter_builds_are_deterministic_with_exact_interval_sizes() {
    for (n, k, l) in [(6, 4, 2), (8, 4, 4), (7, 3, 3)] {
        let a = build_interval_splitter(n, k, l).unwrap();
        assert_eq!(a, build_interval_splitter(n, k, l).unwrap());
        assert_eq!(a.len(), binomial(n - 1, l - 1));
    }
    assert_eq!(
        build_code_splitter(20, 3).unwrap(),
        build_code_splitter(20, 3).unwrap()
    );
}
