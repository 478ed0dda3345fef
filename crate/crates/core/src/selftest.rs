//! The acceptance grid: fourteen numbered checks, each against an
//! independent oracle and a wall-clock limit.
//!
//! Criteria 1 to 6 also feed a shared bookkeeping tally (degree bound,
//! value bound, count bound), which criterion 7 reports.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{cantor_pair, find_prime_in_dyadic_interval, Monomial, SparsePolynomial};
use crate::circuits::{expand, homogenize, verify_circuit, ArithmeticCircuit};
use crate::error::Error;
use crate::formulations::{formulate, FormulationOutput, Instance, Params, Problem};
use crate::pipeline::{run_pipeline, PipelineConfig};
use crate::reference as oracle;
use crate::solvers::{
    block_nodes, chromatic_number, hamiltonian_path, matching3d_max, set_cover_min, subset_graph,
    tree_edge_partition, Graph, ProblemInstance,
};
use crate::splitters::{
    build_code_splitter, build_greedy_splitter, build_interval_splitter, compose_splitter,
    greedy_size_bound, verify_splitter, SplitKind, SplitterFamily,
};
use crate::{bits, par};

/// Which criteria to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Algebra,
    Circuits,
    Splitters,
    Solvers,
    Formulations,
    Pipeline,
    All,
}

impl Scope {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Scope::Algebra => &[11, 14],
            Scope::Circuits => &[9, 10],
            Scope::Splitters => &[8],
            Scope::Solvers => &[13],
            Scope::Formulations => &[1, 2, 3, 4, 5, 6, 7],
            Scope::Pipeline => &[12],
            Scope::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14],
        }
    }
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Ok(match s {
            "algebra" => Scope::Algebra,
            "circuits" => Scope::Circuits,
            "splitters" => Scope::Splitters,
            "solvers" => Scope::Solvers,
            "formulations" => Scope::Formulations,
            "pipeline" => Scope::Pipeline,
            "all" => Scope::All,
            _ => return Err(Error::param(format!("unknown selftest scope `{s}`"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

/// `(name, limit)` of criterion `id`; `None` limits are inline checks.
pub fn describe(id: u8) -> (&'static str, Option<Duration>) {
    let min = |m: u64| Some(Duration::from_secs(60 * m));
    match id {
        1 => ("hamiltonian path", min(2)),
        2 => ("independent set, clique, vertex cover", min(2)),
        3 => ("max-k-sat and k-sat", min(2)),
        4 => ("graph coloring", min(1)),
        5 => ("set cover and 3d-matching", min(2)),
        6 => ("parameterized suite", min(5)),
        7 => ("degree and count bookkeeping", None),
        8 => ("splitters", min(3)),
        9 => ("homogenization", min(1)),
        10 => ("verifier soundness by mutation", min(2)),
        11 => ("prime intervals", Some(Duration::from_secs(1))),
        12 => ("end-to-end pipeline", min(3)),
        13 => ("tree partition", min(1)),
        14 => ("pairing injectivity", Some(Duration::from_secs(1))),
        _ => ("unknown", None),
    }
}

type Outcome = std::result::Result<String, String>;

fn fail<T>(msg: impl fmt::Display) -> std::result::Result<T, String> {
    Err(msg.to_string())
}

fn lift<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(id as u64 + 1)))
}

/// Runs `ids` in order. Criterion 7 reports the tally of the formulation
/// criteria run before it, running them first if none were.
pub fn run(ids: &[u8], seed: u64) -> Vec<CriterionResult> {
    let tally = Tally::default();
    let mut out = Vec::with_capacity(ids.len());
    for &id in ids {
        if id == 7 && tally.formulations() == 0 {
            for pre in 1..=6 {
                let _ = execute(pre, seed, &tally);
            }
        }
        out.push(execute(id, seed, &tally));
    }
    out
}

pub fn run_scope(scope: Scope, seed: u64) -> Vec<CriterionResult> {
    run(scope.criteria(), seed)
}

fn execute(id: u8, seed: u64, tally: &Tally) -> CriterionResult {
    let (name, limit) = describe(id);
    let clock = Instant::now();
    let outcome = match id {
        1 => ham_path(seed, tally),
        2 => independent_sets(tally),
        3 => satisfiability(seed, tally),
        4 => coloring(tally),
        5 => cover_and_matching(seed, tally),
        6 => parameterized(seed, tally),
        7 => tally.report(),
        8 => splitters(),
        9 => homogenization(seed),
        10 => mutation_soundness(seed),
        11 => prime_intervals(),
        12 => pipeline(seed),
        13 => tree_partition(seed),
        14 => pairing(),
        _ => fail(format!("no criterion {id}")),
    };
    let elapsed = clock.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = limit {
        if elapsed >= limit {
            passed = false;
            detail = format!("{detail}; exceeded {limit:?}");
        }
    }
    CriterionResult {
        id,
        name,
        passed,
        detail: format!("{detail} ({:.2}s)", elapsed.as_secs_f64()),
        elapsed,
        limit,
    }
}

// Bookkeeping shared by criteria 1 to 6.

#[derive(Default)]
struct Tally {
    inner: Mutex<TallyInner>,
}

#[derive(Default)]
struct TallyInner {
    formulations: usize,
    evaluations: usize,
    violations: Vec<String>,
}

impl Tally {
    fn formulations(&self) -> usize {
        self.inner.lock().expect("tally lock").formulations
    }

    fn violation(&self, msg: String) {
        let mut t = self.inner.lock().expect("tally lock");
        if t.violations.len() < 8 {
            t.violations.push(msg);
        } else {
            t.violations.push(String::new());
        }
    }

    fn report(&self) -> Outcome {
        let t = self.inner.lock().expect("tally lock");
        if !t.violations.is_empty() {
            let shown: Vec<&str> = t
                .violations
                .iter()
                .filter(|v| !v.is_empty())
                .map(String::as_str)
                .collect();
            return fail(format!(
                "{} violations: {}",
                t.violations.len(),
                shown.join("; ")
            ));
        }
        Ok(format!(
            "{} formulations, {} evaluations, 0 violations",
            t.formulations, t.evaluations
        ))
    }
}

/// A formulation with its monomial count.
struct Checked {
    out: FormulationOutput,
    monomials: BigInt,
}

fn checked(
    problem: Problem,
    params: &Params,
    tally: &Tally,
) -> std::result::Result<Checked, String> {
    let out = lift(formulate(problem, params))?;
    let monomials = BigInt::from(out.poly.len());
    let cap = BigInt::one() << out.s();
    let label = format!("{problem} {:?}", params.pairs());
    if out.poly.max_degree() > out.delta() {
        tally.violation(format!(
            "{label}: degree {} > Δ {}",
            out.poly.max_degree(),
            out.delta()
        ));
    }
    if monomials >= cap {
        tally.violation(format!("{label}: {monomials} monomials, not below 2^s"));
    }
    if out.poly.terms().iter().any(|(_, c)| !c.is_one()) {
        tally.violation(format!("{label}: coefficient other than 1"));
    }
    tally.inner.lock().expect("tally lock").formulations += 1;
    Ok(Checked { out, monomials })
}

fn decide(f: &Checked, inst: &Instance, tally: &Tally) -> std::result::Result<bool, String> {
    let x = lift(f.out.assign(inst))?;
    let value = lift(f.out.evaluate(&x))?;
    tally.inner.lock().expect("tally lock").evaluations += 1;
    if value > f.monomials || value < BigInt::zero() {
        tally.violation(format!(
            "{}: value {value} outside [0, {}]",
            f.out.problem(),
            f.monomials
        ));
    }
    Ok(!value.is_zero())
}

/// Counts disagreements between the formulation and `want` over `cases`.
fn sweep<T: Sync>(
    f: &Checked,
    cases: &[T],
    tally: &Tally,
    inst: impl Fn(&T) -> Instance + Sync + Send,
    want: impl Fn(&T) -> std::result::Result<bool, String> + Sync + Send,
) -> std::result::Result<(usize, usize), String> {
    let rows = par::map(cases, |c| -> std::result::Result<(bool, bool), String> {
        Ok((decide(f, &inst(c), tally)?, want(c)?))
    });
    let (mut mismatches, mut yes) = (0, 0);
    for r in rows {
        let (got, want) = r?;
        mismatches += (got != want) as usize;
        yes += want as usize;
    }
    Ok((mismatches, yes))
}

fn graph_instance(g: &Graph) -> Instance {
    ProblemInstance::Graph(g.clone()).into()
}

struct Score {
    checks: usize,
    yes: usize,
    mismatches: usize,
    notes: Vec<String>,
}

impl Score {
    fn new() -> Self {
        Score {
            checks: 0,
            yes: 0,
            mismatches: 0,
            notes: Vec::new(),
        }
    }

    fn add(&mut self, label: impl fmt::Display, checks: usize, (mismatches, yes): (usize, usize)) {
        self.checks += checks;
        self.yes += yes;
        self.mismatches += mismatches;
        if mismatches > 0 && self.notes.len() < 6 {
            self.notes.push(format!("{label}: {mismatches}"));
        }
    }

    fn finish(self) -> Outcome {
        let summary = format!(
            "{} checks ({} yes), {} mismatches",
            self.checks, self.yes, self.mismatches
        );
        if self.mismatches == 0 {
            Ok(summary)
        } else {
            fail(format!("{summary} [{}]", self.notes.join(", ")))
        }
    }
}

fn params(n: usize, theta: usize, extra: &[(&str, usize)]) -> std::result::Result<Params, String> {
    extra
        .iter()
        .try_fold(Params::new(n, theta), |p, &(k, v)| lift(p.with(k, v)))
}

// 1. Hamiltonian path.

fn ham_path(seed: u64, tally: &Tally) -> Outcome {
    let mut score = Score::new();
    let bhk = |g: &Graph| -> std::result::Result<bool, String> {
        let want = lift(hamiltonian_path(g))?;
        if want != oracle::ham_path(g) {
            return fail("oracles disagree");
        }
        Ok(want)
    };

    let small = checked(Problem::HamPath, &Params::new(4, 2), tally)?;
    if small.out.s() != 36 {
        return fail(format!(
            "n=4 θ=2 legend has {} keys, expected 36",
            small.out.s()
        ));
    }
    let all: Vec<Graph> = (0..1u64 << 12)
        .map(|c| oracle::graph_from_code(4, true, c))
        .collect();
    score.add(
        "n=4",
        all.len(),
        sweep(&small, &all, tally, graph_instance, bhk)?,
    );

    let mut rng = rng_for(seed, 1);
    let big = checked(Problem::HamPath, &Params::new(6, 3), tally)?;
    let random: Vec<Graph> = (0..500)
        .map(|_| oracle::random_graph(&mut rng, 6, 0.35, true))
        .collect();
    score.add(
        "n=6",
        random.len(),
        sweep(&big, &random, tally, graph_instance, bhk)?,
    );
    score.finish()
}

// 2. Independent set, clique, vertex cover.

fn independent_sets(tally: &Tally) -> Outcome {
    let mut score = Score::new();
    let graphs: Vec<Graph> = (0..1u64 << 10)
        .map(|c| oracle::graph_from_code(5, false, c))
        .collect();
    let mis: Vec<usize> = par::map(&graphs, oracle::max_independent_set);
    let clique: Vec<usize> = par::map(&graphs, oracle::max_clique);
    let cover: Vec<usize> = par::map(&graphs, oracle::min_vertex_cover);
    let idx: Vec<usize> = (0..graphs.len()).collect();
    let inst = |&i: &usize| graph_instance(&graphs[i]);
    for t in 0..=5 {
        let p = params(5, 2, &[("t", t)])?;
        let f = checked(Problem::IndependentSet, &p, tally)?;
        score.add(
            format!("is t={t}"),
            idx.len(),
            sweep(&f, &idx, tally, inst, |&i| Ok(mis[i] >= t))?,
        );
        let f = checked(Problem::Clique, &p, tally)?;
        score.add(
            format!("clique t={t}"),
            idx.len(),
            sweep(&f, &idx, tally, inst, |&i| Ok(clique[i] >= t))?,
        );
        let f = checked(Problem::VertexCover, &p, tally)?;
        score.add(
            format!("vc t={t}"),
            idx.len(),
            sweep(&f, &idx, tally, inst, |&i| Ok(cover[i] <= t))?,
        );
    }
    score.finish()
}

// 3. MAX-k-SAT and k-SAT.

fn satisfiability(seed: u64, tally: &Tally) -> Outcome {
    let mut rng = rng_for(seed, 3);
    let formulas: Vec<_> = (0..200)
        .map(|_| {
            let m = rng.gen_range(1..=8);
            oracle::random_cnf(&mut rng, 6, m, 2)
        })
        .collect();
    let best: Vec<usize> = par::map(&formulas, oracle::max_sat);
    let mut score = Score::new();
    for t in 0..=8 {
        let f = checked(
            Problem::MaxKSat,
            &params(6, 3, &[("k", 2), ("t", t)])?,
            tally,
        )?;
        let idx: Vec<usize> = (0..formulas.len())
            .filter(|&i| t <= formulas[i].clauses.len())
            .collect();
        let r = sweep(
            &f,
            &idx,
            tally,
            |&i| ProblemInstance::Cnf(formulas[i].clone()).into(),
            |&i| Ok(best[i] >= t),
        )?;
        score.add(format!("max t={t}"), idx.len(), r);
    }
    for m in 1..=8 {
        let f = checked(Problem::KSat, &params(6, 3, &[("k", 2), ("m", m)])?, tally)?;
        let idx: Vec<usize> = (0..formulas.len())
            .filter(|&i| formulas[i].clauses.len() == m)
            .collect();
        let r = sweep(
            &f,
            &idx,
            tally,
            |&i| ProblemInstance::Cnf(formulas[i].clone()).into(),
            |&i| Ok(best[i] == m),
        )?;
        score.add(format!("sat m={m}"), idx.len(), r);
    }
    score.finish()
}

// 4. Graph coloring.

fn coloring(tally: &Tally) -> Outcome {
    let graphs: Vec<Graph> = (0..1u64 << 6)
        .map(|c| oracle::graph_from_code(4, false, c))
        .collect();
    let chi = graphs
        .iter()
        .map(|g| {
            let c = lift(chromatic_number(g, bits::full(4)))?;
            if c != oracle::chromatic_number(g) {
                return fail("chromatic oracles disagree");
            }
            Ok(c)
        })
        .collect::<std::result::Result<Vec<usize>, String>>()?;
    let idx: Vec<usize> = (0..graphs.len()).collect();
    let mut score = Score::new();
    for t in 1..=4 {
        let f = checked(Problem::Coloring, &params(4, 2, &[("t", t)])?, tally)?;
        let r = sweep(
            &f,
            &idx,
            tally,
            |&i| graph_instance(&graphs[i]),
            |&i| Ok(chi[i] <= t),
        )?;
        score.add(format!("t={t}"), idx.len(), r);
    }
    score.finish()
}

// 5. Set cover and 3d-matching.

fn cover_and_matching(seed: u64, tally: &Tally) -> Outcome {
    let mut rng = rng_for(seed, 5);
    let mut score = Score::new();

    let families: Vec<_> = (0..200)
        .map(|_| {
            let m = rng.gen_range(1..=8);
            oracle::random_family(&mut rng, 6, m, 0.35)
        })
        .collect();
    let best = families
        .iter()
        .map(|f| {
            let dp = lift(set_cover_min(f, bits::full(6)))?;
            if dp != oracle::min_set_cover(f) {
                return fail("set cover oracles disagree");
            }
            Ok(dp)
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    let idx: Vec<usize> = (0..families.len()).collect();
    for t in 0..=4 {
        let f = checked(
            Problem::SetCover,
            &params(6, 2, &[("m", 8), ("t", t)])?,
            tally,
        )?;
        let r = sweep(
            &f,
            &idx,
            tally,
            |&i| ProblemInstance::Family(families[i].clone()).into(),
            |&i| Ok(best[i].is_some_and(|c| c <= t)),
        )?;
        score.add(format!("cover t={t}"), idx.len(), r);
    }

    let hypers: Vec<_> = (0..200)
        .map(|_| {
            let count = rng.gen_range(0..=9);
            oracle::random_hypergraph(&mut rng, 3, count)
        })
        .collect();
    let best = hypers
        .iter()
        .map(|h| {
            let dp = matching3d_max(h, bits::full(3), bits::full(3), bits::full(3));
            if dp != oracle::max_3d_matching(h) {
                return fail("matching oracles disagree");
            }
            Ok(dp)
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    let idx: Vec<usize> = (0..hypers.len()).collect();
    for t in 0..=3 {
        let f = checked(Problem::Matching3d, &params(3, 2, &[("t", t)])?, tally)?;
        let r = sweep(
            &f,
            &idx,
            tally,
            |&i| ProblemInstance::Hyper(hypers[i].clone()).into(),
            |&i| Ok(best[i] >= t),
        )?;
        score.add(format!("3dm t={t}"), idx.len(), r);
    }
    score.finish()
}

// 6. Parameterized problems.

fn parameterized(seed: u64, tally: &Tally) -> Outcome {
    let mut rng = rng_for(seed, 6);
    let mut score = Score::new();
    let graphs = |rng: &mut ChaCha8Rng, n: usize, p: f64, count: usize| -> Vec<Graph> {
        (0..count)
            .map(|_| oracle::random_graph(rng, n, p, false))
            .collect()
    };

    // Vertex cover and nonblocker, n = 6.
    let g6 = graphs(&mut rng, 6, 0.4, 100);
    let cover: Vec<usize> = par::map(&g6, oracle::min_vertex_cover);
    let nonblock: Vec<usize> = par::map(&g6, oracle::max_nonblocker);
    let idx: Vec<usize> = (0..g6.len()).collect();
    for theta in [2, 3] {
        for k in 0..=3 {
            let p = params(6, theta, &[("k", k)])?;
            let f = checked(Problem::KVertexCover, &p, tally)?;
            let r = sweep(
                &f,
                &idx,
                tally,
                |&i| graph_instance(&g6[i]),
                |&i| Ok(cover[i] <= k),
            )?;
            score.add(format!("k-vc θ={theta} k={k}"), idx.len(), r);
            let f = checked(Problem::KNonblocker, &p, tally)?;
            let r = sweep(
                &f,
                &idx,
                tally,
                |&i| graph_instance(&g6[i]),
                |&i| Ok(nonblock[i] >= k),
            )?;
            score.add(format!("nonblocker θ={theta} k={k}"), idx.len(), r);
        }
    }

    // Set splitting, n = 6, m = 4.
    let fams: Vec<_> = (0..100)
        .map(|_| oracle::random_family(&mut rng, 6, 4, 0.4))
        .collect();
    let split: Vec<usize> = par::map(&fams, oracle::max_set_splitting);
    let idx: Vec<usize> = (0..fams.len()).collect();
    for theta in [2, 3] {
        for k in 0..=3 {
            let f = checked(
                Problem::KSetSplitting,
                &params(6, theta, &[("m", 4), ("k", k)])?,
                tally,
            )?;
            let r = sweep(
                &f,
                &idx,
                tally,
                |&i| ProblemInstance::Family(fams[i].clone()).into(),
                |&i| Ok(split[i] >= k),
            )?;
            score.add(format!("splitting θ={theta} k={k}"), idx.len(), r);
        }
    }

    // Steiner tree, n = 7, three terminals, weights 1..=3, budgets 0..=w.
    const W: usize = 8;
    let weighted: Vec<(Graph, Vec<usize>)> = (0..40)
        .map(|_| {
            let g = oracle::random_weighted_graph(&mut rng, 7, 0.4, 3);
            let mut nodes: Vec<usize> = (0..7).collect();
            rand::seq::SliceRandom::shuffle(&mut nodes[..], &mut rng);
            (g, nodes[..3].to_vec())
        })
        .collect();
    let best: Vec<Option<u64>> = par::map(&weighted, |(g, t)| oracle::steiner_min(g, t));
    let cases: Vec<(usize, usize)> = (0..weighted.len())
        .flat_map(|i| (0..=W).map(move |t| (i, t)))
        .collect();
    for theta in [2, 3] {
        let f = checked(
            Problem::KSteinerTree,
            &params(7, theta, &[("k", 3), ("w", W)])?,
            tally,
        )?;
        let r = sweep(
            &f,
            &cases,
            tally,
            |&(i, t)| {
                Instance::new(ProblemInstance::Graph(weighted[i].0.clone()))
                    .with_terminals(weighted[i].1.clone())
                    .with_budget(t)
            },
            |&(i, t)| Ok(best[i].is_some_and(|b| b <= t as u64)),
        )?;
        score.add(format!("steiner θ={theta}"), cases.len(), r);
    }

    // Internal and leaf spanning trees, n = 6, θ = 3.
    let g6 = graphs(&mut rng, 6, 0.5, 60);
    let internal: Vec<Option<usize>> = par::map(&g6, oracle::max_internal_spanning_tree);
    let leaves: Vec<Option<usize>> = par::map(&g6, oracle::max_leaf_spanning_tree);
    let idx: Vec<usize> = (0..g6.len()).collect();
    for k in 0..=3 {
        let p = params(6, 3, &[("k", k)])?;
        let f = checked(Problem::KInternalSpanningTree, &p, tally)?;
        let r = sweep(
            &f,
            &idx,
            tally,
            |&i| graph_instance(&g6[i]),
            |&i| Ok(internal[i].is_some_and(|b| b >= k)),
        )?;
        score.add(format!("internal k={k}"), idx.len(), r);
        let f = checked(Problem::KLeafSpanningTree, &p, tally)?;
        let r = sweep(
            &f,
            &idx,
            tally,
            |&i| graph_instance(&g6[i]),
            |&i| Ok(leaves[i].is_some_and(|b| b >= k)),
        )?;
        score.add(format!("leaf k={k}"), idx.len(), r);
    }

    // k-path, n = 10.
    let g10 = graphs(&mut rng, 10, 0.18, 60);
    let idx: Vec<usize> = (0..g10.len()).collect();
    for k in 0..=4 {
        let f = checked(Problem::KPath, &params(10, 2, &[("k", k)])?, tally)?;
        let r = sweep(
            &f,
            &idx,
            tally,
            |&i| graph_instance(&g10[i]),
            |&i| Ok(oracle::k_path(&g10[i], k)),
        )?;
        score.add(format!("k-path k={k}"), idx.len(), r);
    }
    score.finish()
}

// 8. Splitters.

fn dual_verify(
    h: &SplitterFamily,
    mode: SplitKind,
    label: &str,
) -> std::result::Result<(), String> {
    let fast = lift(verify_splitter(h, mode))?;
    let slow = oracle::splitter_covers(h, mode);
    match (fast, slow) {
        (None, true) => Ok(()),
        (Some(w), false) => fail(format!("{label}: not a splitter, e.g. {w:?}")),
        _ => fail(format!("{label}: verifiers disagree")),
    }
}

fn splitters() -> Outcome {
    let mut notes = Vec::new();
    for (n, k) in [(20, 3), (50, 3), (30, 4)] {
        let h = lift(build_code_splitter(n, k))?;
        dual_verify(&h, SplitKind::Injective, &format!("code ({n},{k})"))?;
        notes.push(format!("code({n},{k})={}", h.len()));
    }
    for (n, k, l) in [(6, 4, 2), (8, 4, 4)] {
        let h = lift(build_interval_splitter(n, k, l))?;
        dual_verify(&h, SplitKind::Even, &format!("interval ({n},{k},{l})"))?;
        notes.push(format!("interval({n},{k},{l})={}", h.len()));
    }
    for (n, k, c) in [(8, 3, 2), (10, 3, 2)] {
        let h = lift(build_greedy_splitter(n, k, c))?;
        dual_verify(&h, SplitKind::Injective, &format!("greedy ({n},{k},{c})"))?;
        let bound = ((k as f64 / c as f64).exp() * k as f64 * (n as f64).ln()).ceil() as usize + 1;
        if h.len() > bound || bound != greedy_size_bound(n, k, c) {
            return fail(format!(
                "greedy ({n},{k},{c}) has {} members, bound {bound}",
                h.len()
            ));
        }
        notes.push(format!("greedy({n},{k},{c})={}≤{bound}", h.len()));
    }
    for (n, k, c) in [(10, 3, 2), (12, 4, 2)] {
        let s = lift(compose_splitter(n, k, c))?;
        dual_verify(
            &s.family,
            SplitKind::Injective,
            &format!("compose ({n},{k},{c})"),
        )?;
        let expect = s.code_size * s.interval_size * s.greedy_size.pow(s.blocks as u32);
        if s.family.len() != expect {
            return fail(format!(
                "compose ({n},{k},{c}) has {} members, expected {expect}",
                s.family.len()
            ));
        }
        notes.push(format!("compose({n},{k},{c})={}", s.family.len()));
    }
    Ok(notes.join(" "))
}

// 9. Homogenization.

fn homogenization(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 9);
    let p = lift(find_prime_in_dyadic_interval(40))?;
    let mut worst = 0.0f64;
    for case in 0..100 {
        let nvars = rng.gen_range(1..=4);
        let gates = rng.gen_range(1..=26);
        let delta = rng.gen_range(1..=4u32);
        let c = oracle::random_circuit(&mut rng, nvars, gates, 8);
        let h = lift(homogenize(&c, delta))?;
        let bound = 9 * (delta as usize + 1).pow(2) * c.size();
        if h.base.size() > bound {
            return fail(format!("case {case}: size {} > {bound}", h.base.size()));
        }
        if c.size() > 0 {
            worst =
                worst.max(h.base.size() as f64 / ((delta as f64 + 1.0).powi(2) * c.size() as f64));
        }
        // Expand every gate of the homogeneous circuit.
        let all: Vec<usize> = (0..h.base.gates().len()).collect();
        let every = lift(ArithmeticCircuit::new(
            nvars,
            Some(p),
            h.base.gates().to_vec(),
            all,
        ))?;
        let polys = lift(expand(&every, delta))?;
        for (g, f) in polys.iter().enumerate() {
            let d = h.degree_of[g];
            if !oracle::to_naive(f)
                .keys()
                .all(|m| m.iter().sum::<u32>() == d)
            {
                return fail(format!(
                    "case {case}: gate {g} is not homogeneous of degree {d}"
                ));
            }
        }
        let mut sum = oracle::NaivePoly::new();
        for (d, &g) in h.component_outputs.iter().enumerate() {
            for (m, coeff) in oracle::to_naive(&polys[g]) {
                if m.iter().sum::<u32>() != d as u32 {
                    return fail(format!(
                        "case {case}: component {d} has a term of another degree"
                    ));
                }
                *sum.entry(m).or_insert_with(BigInt::zero) += coeff;
            }
        }
        let sum = oracle::naive_truncate_mod(&sum, delta, p);
        let want = oracle::naive_truncate_mod(&oracle::naive_expand(&c), delta, p);
        if sum != want {
            return fail(format!(
                "case {case}: components do not sum to the truncation"
            ));
        }
    }
    Ok(format!(
        "100 circuits, largest size ratio {worst:.2}·(Δ+1)²·size ≤ 9"
    ))
}

// 10. Verifier soundness.

fn naive_to_sparse(
    f: &oracle::NaivePoly,
    nvars: usize,
    delta: u32,
    p: crate::algebra::PrimeModulus,
) -> std::result::Result<SparsePolynomial, String> {
    let terms = f.iter().map(|(e, c)| {
        let m = Monomial::from_terms(e.iter().enumerate().map(|(v, &d)| (v as u32, d)));
        (m, c.clone())
    });
    lift(SparsePolynomial::from_terms(nvars, delta, Some(p), terms))
}

fn mutation_soundness(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 10);
    let p = lift(find_prime_in_dyadic_interval(30))?;
    let (mut different, mut same, mut false_accepts, mut false_rejects) = (0, 0, 0, 0);
    let mut pairs = 0;
    while pairs < 50 {
        let nvars = rng.gen_range(1..=4);
        let delta = rng.gen_range(1..=4u32);
        let gates = rng.gen_range(4..=24);
        let c = oracle::random_circuit(&mut rng, nvars, gates, 8);
        let truth = oracle::naive_truncate_mod(&oracle::naive_expand(&c), delta, p);
        let target = naive_to_sparse(&truth, nvars, delta, p)?;
        if !lift(verify_circuit(&c, &target, delta, p))?.is_accept() {
            return fail(format!("pair {pairs}: the true expansion is rejected"));
        }
        pairs += 1;
        let mutants: Vec<ArithmeticCircuit> =
            (0..100).map(|_| oracle::mutate(&mut rng, &c)).collect();
        let verdicts = par::map(&mutants, |m| -> std::result::Result<(bool, bool), String> {
            let semantic = oracle::naive_truncate_mod(&oracle::naive_expand(m), delta, p);
            Ok((
                semantic != truth,
                lift(verify_circuit(m, &target, delta, p))?.is_accept(),
            ))
        });
        for v in verdicts {
            let (differs, accepted) = v?;
            if differs {
                different += 1;
                false_accepts += accepted as usize;
            } else {
                same += 1;
                false_rejects += !accepted as usize;
            }
        }
    }
    let summary = format!(
        "5000 mutants: {different} different ({false_accepts} accepted), {same} equivalent ({false_rejects} rejected)"
    );
    if false_accepts + false_rejects == 0 {
        Ok(summary)
    } else {
        fail(summary)
    }
}

// 11. Prime intervals.

fn trial_division_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_intervals() -> Outcome {
    let rows = par::map_range(41, |t| -> std::result::Result<u64, String> {
        let p = lift(find_prime_in_dyadic_interval(t as u32))?.value();
        let (lo, hi) = (1u64 << (t + 1), 1u64 << (t + 2));
        if !(lo..=hi).contains(&p) || !trial_division_prime(p) {
            return fail(format!("t={t}: {p} is not a prime in [{lo}, {hi}]"));
        }
        if (lo..p).any(crate::algebra::is_prime) {
            return fail(format!("t={t}: a smaller prime exists in the interval"));
        }
        Ok(p)
    });
    let primes = rows
        .into_iter()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(format!("t=0..40, p(40)={}", primes[40]))
}

// 12. Pipeline.

fn pipeline(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 12);
    let graphs: Vec<Graph> = (0..500)
        .map(|_| oracle::random_graph(&mut rng, 6, 0.35, true))
        .collect();
    let instances: Vec<Instance> = graphs.iter().map(graph_instance).collect();
    let report = lift(run_pipeline(
        Problem::HamPath,
        &Params::new(6, 3),
        &instances,
        &PipelineConfig::default(),
    ))?;
    if !report.accepted() {
        return fail("verification rejected the canonical circuit");
    }
    if report.decisions.len() != graphs.len() {
        return fail("missing decisions");
    }
    let half = report.prime.value() / 2;
    let mut mismatches = 0;
    let mut yes = 0;
    for (g, d) in graphs.iter().zip(&report.decisions) {
        let want = lift(hamiltonian_path(g))?;
        mismatches += (want != d.yes) as usize;
        yes += want as usize;
        if d.value >= half {
            return fail(format!("value {} not below p/2", d.value));
        }
    }
    let summary = format!(
        "p={} s={} monomials={} 500 graphs ({yes} yes), {mismatches} mismatches",
        report.prime.value(),
        report.s,
        report.monomials
    );
    if mismatches == 0 {
        Ok(summary)
    } else {
        fail(summary)
    }
}

// 13. Tree partition.

fn tree_partition(seed: u64) -> Outcome {
    let mut rng = rng_for(seed, 13);
    let mut most_blocks = 0;
    for case in 0..1000 {
        let n = rng.gen_range(1..=40);
        let theta = rng.gen_range(2..=6);
        let tree = oracle::random_tree(&mut rng, n);
        let marked = (0..n)
            .filter(|_| rng.gen_bool(0.4))
            .fold(0u64, |m, v| m | 1 << v);
        let k = marked.count_ones() as usize;
        let blocks = lift(tree_edge_partition(&tree, marked, theta))?;
        if blocks.len() > theta {
            return fail(format!(
                "case {case}: {} blocks for θ={theta}",
                blocks.len()
            ));
        }
        most_blocks = most_blocks.max(blocks.len());
        let mut seen: Vec<(usize, usize)> = blocks
            .iter()
            .flatten()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        seen.sort_unstable();
        let mut all: Vec<(usize, usize)> = tree
            .edges()
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        all.sort_unstable();
        if seen != all {
            return fail(format!("case {case}: blocks do not partition the edges"));
        }
        let nodes: Vec<u64> = blocks.iter().map(|b| block_nodes(b, 0)).collect();
        for (b, &set) in blocks.iter().zip(&nodes) {
            if !b.is_empty() && set.count_ones() as usize != b.len() + 1 {
                return fail(format!("case {case}: a block is not connected"));
            }
            let m = (set & marked).count_ones() as usize;
            if (theta - 1) * m > 2 * k + 2 * (theta - 1) {
                return fail(format!(
                    "case {case}: block holds {m} marked nodes, k={k} θ={theta}"
                ));
            }
        }
        if !subset_graph(&nodes).is_tree() {
            return fail(format!("case {case}: block incidence is not a tree"));
        }
    }
    Ok(format!("1000 trees, at most {most_blocks} blocks"))
}

// 14. Pairing.

#[allow(clippy::needless_range_loop)]
fn pairing() -> Outcome {
    let mut seen = HashSet::with_capacity(301 * 301);
    // Independent route: walk the diagonals in order, counting.
    let mut expected = vec![vec![0u128; 301]; 301];
    let mut next = 0u128;
    for d in 0..=600usize {
        for k in 0..=d {
            let s = d - k;
            if s <= 300 && k <= 300 {
                expected[s][k] = next;
            }
            next += 1;
        }
    }
    for s in 0..=300u64 {
        for k in 0..=300u64 {
            let v = cantor_pair(s, k);
            if v != expected[s as usize][k as usize] {
                return fail(format!(
                    "cantor_pair({s},{k}) = {v}, diagonal count says {}",
                    expected[s as usize][k as usize]
                ));
            }
            if !seen.insert(v) {
                return fail(format!("collision at ({s},{k})"));
            }
        }
    }
    Ok(format!("{} distinct values", seen.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scopes_parse_and_cover_everything() {
        assert_eq!("all".parse::<Scope>().unwrap().criteria().len(), 14);
        assert!("everything".parse::<Scope>().is_err());
        let mut ids: Vec<u8> = [
            Scope::Algebra,
            Scope::Circuits,
            Scope::Splitters,
            Scope::Solvers,
            Scope::Formulations,
            Scope::Pipeline,
        ]
        .iter()
        .flat_map(|s| s.criteria().iter().copied())
        .collect();
        ids.sort_unstable();
        assert_eq!(ids, Scope::All.criteria());
    }

    #[test]
    fn quick_criteria_pass() {
        for r in run(&[11, 14], 1) {
            assert!(r.passed, "{r}");
        }
    }
}
