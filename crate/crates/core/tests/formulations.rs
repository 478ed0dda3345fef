use num_bigint::BigInt;
use num_traits::Zero;
use polyform::formulations::{formulate, FormulationOutput, Instance, Params, Problem};
use polyform::reference as oracle;
use polyform::solvers::ProblemInstance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(n: usize, theta: usize, extra: &[(&str, usize)]) -> Params {
    extra
        .iter()
        .fold(Params::new(n, theta), |p, &(k, v)| p.with(k, v).unwrap())
}

fn build(problem: Problem, p: &Params) -> FormulationOutput {
    let out = formulate(problem, p).unwrap();
    assert!(
        out.poly.max_degree() <= out.delta(),
        "{problem} exceeds its degree bound"
    );
    assert!(out.poly.terms().iter().all(|(_, c)| *c == BigInt::from(1)));
    out
}

fn decide(out: &FormulationOutput, inst: impl Into<Instance>) -> bool {
    let x = out.assign(&inst.into()).unwrap();
    let value = out.evaluate(&x).unwrap();
    assert!(value <= BigInt::from(out.monomials()));
    !value.is_zero()
}

#[test]
fn ham_path_legend_size_and_agreement() {
    let out = build(Problem::HamPath, &Params::new(4, 2));
    assert_eq!(out.s(), 24 + 12);
    for code in (0..4096u64).step_by(7) {
        let g = oracle::graph_from_code(4, true, code);
        assert_eq!(
            decide(&out, ProblemInstance::Graph(g.clone())),
            oracle::ham_path(&g),
            "{code}"
        );
    }
}

#[test]
fn independent_set_family_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..=5 {
        let p = params(5, 2, &[("t", t)]);
        let is = build(Problem::IndependentSet, &p);
        let cl = build(Problem::Clique, &p);
        let vc = build(Problem::VertexCover, &p);
        for _ in 0..40 {
            let g = oracle::random_graph(&mut rng, 5, 0.5, false);
            let inst = ProblemInstance::Graph(g.clone());
            assert_eq!(
                decide(&is, inst.clone()),
                oracle::max_independent_set(&g) >= t
            );
            assert_eq!(decide(&cl, inst.clone()), oracle::max_clique(&g) >= t);
            assert_eq!(decide(&vc, inst), oracle::min_vertex_cover(&g) <= t);
        }
    }
}

#[test]
fn max_sat_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cases: Vec<_> = (0..30)
        .map(|i| oracle::random_cnf(&mut rng, 5, 1 + i % 6, 2))
        .collect();
    for t in 0..=6 {
        let out = build(Problem::MaxKSat, &params(5, 3, &[("k", 2), ("t", t)]));
        for f in &cases {
            let want = oracle::max_sat(f) >= t;
            assert_eq!(
                decide(&out, ProblemInstance::Cnf(f.clone())),
                want,
                "t={t} {f:?}"
            );
        }
    }
    for m in 1..=6 {
        let out = build(Problem::KSat, &params(5, 3, &[("k", 2), ("m", m)]));
        for f in cases.iter().filter(|f| f.clauses.len() == m) {
            let want = oracle::max_sat(f) == m;
            assert_eq!(decide(&out, ProblemInstance::Cnf(f.clone())), want);
        }
    }
}

#[test]
fn coloring_agrees() {
    for t in 1..=4 {
        let out = build(Problem::Coloring, &params(4, 2, &[("t", t)]));
        for code in 0..64 {
            let g = oracle::graph_from_code(4, false, code);
            let want = oracle::chromatic_number(&g) <= t;
            assert_eq!(
                decide(&out, ProblemInstance::Graph(g)),
                want,
                "t={t} code={code}"
            );
        }
    }
}

#[test]
fn set_cover_and_matching_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in 0..=4 {
        let out = build(Problem::SetCover, &params(5, 2, &[("m", 5), ("t", t)]));
        for _ in 0..30 {
            let f = oracle::random_family(&mut rng, 5, 5, 0.4);
            let want = oracle::min_set_cover(&f).is_some_and(|c| c <= t);
            assert_eq!(
                decide(&out, ProblemInstance::Family(f.clone())),
                want,
                "t={t} {f:?}"
            );
        }
    }
    for t in 0..=3 {
        let out = build(Problem::Matching3d, &params(3, 2, &[("t", t)]));
        for _ in 0..30 {
            let h = oracle::random_hypergraph(&mut rng, 3, 5);
            let want = oracle::max_3d_matching(&h) >= t;
            assert_eq!(
                decide(&out, ProblemInstance::Hyper(h.clone())),
                want,
                "t={t} {h:?}"
            );
        }
    }
}

#[test]
fn parameterized_graph_problems_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..=3 {
        let vc = build(Problem::KVertexCover, &params(6, 2, &[("k", k)]));
        let nb = build(Problem::KNonblocker, &params(6, 2, &[("k", k)]));
        for _ in 0..20 {
            let g = oracle::random_graph(&mut rng, 6, 0.4, false);
            let inst = ProblemInstance::Graph(g.clone());
            assert_eq!(
                decide(&vc, inst.clone()),
                oracle::min_vertex_cover(&g) <= k,
                "vc k={k}"
            );
            assert_eq!(
                decide(&nb, inst),
                oracle::max_nonblocker(&g) >= k,
                "nb k={k}"
            );
        }
    }
}

#[test]
fn spanning_trees_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..=3 {
        let it = build(Problem::KInternalSpanningTree, &params(5, 3, &[("k", k)]));
        let lt = build(Problem::KLeafSpanningTree, &params(5, 3, &[("k", k)]));
        for _ in 0..15 {
            let g = oracle::random_graph(&mut rng, 5, 0.5, false);
            let inst = ProblemInstance::Graph(g.clone());
            let want_i = oracle::max_internal_spanning_tree(&g).is_some_and(|b| b >= k);
            let want_l = oracle::max_leaf_spanning_tree(&g).is_some_and(|b| b >= k);
            assert_eq!(decide(&it, inst.clone()), want_i, "internal k={k} {g:?}");
            assert_eq!(decide(&lt, inst), want_l, "leaf k={k} {g:?}");
        }
    }
}

#[test]
fn set_splitting_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..=3 {
        let out = build(Problem::KSetSplitting, &params(5, 2, &[("m", 4), ("k", k)]));
        for _ in 0..20 {
            let f = oracle::random_family(&mut rng, 5, 4, 0.5);
            let want = oracle::max_set_splitting(&f) >= k;
            assert_eq!(
                decide(&out, ProblemInstance::Family(f.clone())),
                want,
                "k={k} {f:?}"
            );
        }
    }
}

#[test]
fn steiner_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out = build(Problem::KSteinerTree, &params(6, 2, &[("k", 3), ("w", 6)]));
    for _ in 0..20 {
        let g = oracle::random_weighted_graph(&mut rng, 6, 0.5, 2);
        let terminals = vec![0, 2, 4];
        let best = oracle::steiner_min(&g, &terminals);
        for t in 0..=6 {
            let inst = Instance::new(ProblemInstance::Graph(g.clone()))
                .with_terminals(terminals.clone())
                .with_budget(t);
            let want = best.is_some_and(|b| b <= t as u64);
            assert_eq!(decide(&out, inst), want, "t={t} {g:?}");
        }
    }
}

#[test]
fn k_path_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..=4 {
        let out = build(Problem::KPath, &params(6, 2, &[("k", k)]));
        for _ in 0..20 {
            let g = oracle::random_graph(&mut rng, 6, 0.3, false);
            let want = oracle::k_path(&g, k);
            assert_eq!(
                decide(&out, ProblemInstance::Graph(g.clone())),
                want,
                "k={k} {g:?}"
            );
        }
    }
}
