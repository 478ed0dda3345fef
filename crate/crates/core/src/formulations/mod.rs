//! Polynomial formulations.
//!
//! Each problem is split into a variable legend, a polynomial over the
//! legend whose monomials all have coefficient 1, and an assignment map
//! sending an instance to a 0/1 point. The polynomial is nonzero at the
//! point exactly on yes-instances, and its value there counts the monomials
//! whose variables are all set. Witnesses that produce the same monomial
//! collapse to one term.

mod bundle;
mod exact;
mod key;
mod kpath;
mod param;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;

pub use bundle::{parse_assignment, parse_meta, write_assignment, write_legend, write_meta, Meta};
pub use key::VariableKey;

use crate::algebra::{cantor_pair, Monomial, SparsePolynomial};
use crate::bits::{bit, ceil_div, full, popcount, Mask};
use crate::error::{Error, Result};
use crate::par;
use crate::solvers::{Graph, ProblemInstance, SetFamily};
use crate::splitters::SplitterFamily;

/// Problems with a formulation. The first nine take size parameters only;
/// the `k-` problems are parameterized by `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Problem {
    HamPath,
    IndependentSet,
    Clique,
    VertexCover,
    MaxKSat,
    KSat,
    Coloring,
    SetCover,
    Matching3d,
    KVertexCover,
    KSteinerTree,
    KInternalSpanningTree,
    KLeafSpanningTree,
    KNonblocker,
    KSetSplitting,
    KPath,
}

impl Problem {
    pub const ALL: [Problem; 16] = [
        Problem::HamPath,
        Problem::IndependentSet,
        Problem::Clique,
        Problem::VertexCover,
        Problem::MaxKSat,
        Problem::KSat,
        Problem::Coloring,
        Problem::SetCover,
        Problem::Matching3d,
        Problem::KVertexCover,
        Problem::KSteinerTree,
        Problem::KInternalSpanningTree,
        Problem::KLeafSpanningTree,
        Problem::KNonblocker,
        Problem::KSetSplitting,
        Problem::KPath,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Problem::HamPath => "ham-path",
            Problem::IndependentSet => "indep-set",
            Problem::Clique => "clique",
            Problem::VertexCover => "vertex-cover",
            Problem::MaxKSat => "max-ksat",
            Problem::KSat => "ksat",
            Problem::Coloring => "coloring",
            Problem::SetCover => "set-cover",
            Problem::Matching3d => "3d-matching",
            Problem::KVertexCover => "k-vc",
            Problem::KSteinerTree => "k-steiner",
            Problem::KInternalSpanningTree => "k-internal-st",
            Problem::KLeafSpanningTree => "k-leaf-st",
            Problem::KNonblocker => "k-nonblocker",
            Problem::KSetSplitting => "k-set-splitting",
            Problem::KPath => "k-path",
        }
    }

    /// Parameters beyond `n` and `theta`: (required, optional).
    pub fn parameters(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Problem::HamPath => (&[], &[]),
            Problem::IndependentSet
            | Problem::Clique
            | Problem::VertexCover
            | Problem::Coloring
            | Problem::Matching3d => (&["t"], &[]),
            Problem::MaxKSat => (&["k", "t"], &["m"]),
            Problem::KSat => (&["k", "m"], &[]),
            Problem::SetCover => (&["m", "t"], &[]),
            Problem::KSteinerTree => (&["k", "w"], &[]),
            Problem::KSetSplitting => (&["m", "k"], &[]),
            Problem::KVertexCover
            | Problem::KInternalSpanningTree
            | Problem::KLeafSpanningTree
            | Problem::KNonblocker
            | Problem::KPath => (&["k"], &[]),
        }
    }

    pub fn is_parameterized(self) -> bool {
        self >= Problem::KVertexCover
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.tag() == s)
            .ok_or_else(|| Error::param(format!("unknown problem '{s}'")))
    }
}

/// Size parameters of a formulation. `n` and `theta` are always present;
/// the rest depend on the problem (see [`Problem::parameters`]).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub n: usize,
    pub theta: usize,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub t: Option<usize>,
    pub w: Option<usize>,
}

impl Params {
    pub fn new(n: usize, theta: usize) -> Self {
        Self {
            n,
            theta,
            ..Self::default()
        }
    }

    /// Builder form of [`Params::set`].
    pub fn with(mut self, name: &str, value: usize) -> Result<Self> {
        self.set(name, value)?;
        Ok(self)
    }

    pub fn set(&mut self, name: &str, value: usize) -> Result<()> {
        match name {
            "n" => self.n = value,
            "theta" => self.theta = value,
            "m" => self.m = Some(value),
            "k" => self.k = Some(value),
            "t" => self.t = Some(value),
            "w" => self.w = Some(value),
            _ => return Err(Error::param(format!("unknown parameter '{name}'"))),
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        match name {
            "n" => Some(self.n),
            "theta" => Some(self.theta),
            "m" => self.m,
            "k" => self.k,
            "t" => self.t,
            "w" => self.w,
            _ => None,
        }
    }

    /// Present parameters in the fixed order `n m k t w theta`.
    pub fn pairs(&self) -> Vec<(&'static str, usize)> {
        ["n", "m", "k", "t", "w", "theta"]
            .into_iter()
            .filter_map(|name| self.get(name).map(|v| (name, v)))
            .collect()
    }

    fn need(&self, name: &str) -> Result<usize> {
        self.get(name)
            .ok_or_else(|| Error::param(format!("missing parameter '{name}'")))
    }

    fn check_for(&self, problem: Problem) -> Result<()> {
        let (required, optional) = problem.parameters();
        for name in required {
            self.need(name)?;
        }
        for (name, _) in self.pairs() {
            if !matches!(name, "n" | "theta")
                && !required.contains(&name)
                && !optional.contains(&name)
            {
                return Err(Error::param(format!(
                    "{problem} takes no parameter '{name}'"
                )));
            }
        }
        if self.theta < 2 {
            return Err(Error::param(format!(
                "theta must be at least 2, got {}",
                self.theta
            )));
        }
        if self.n == 0 {
            return Err(Error::param("n must be positive"));
        }
        if self.n > crate::solvers::MAX_NODES {
            return Err(Error::param(format!(
                "n = {} exceeds {}",
                self.n,
                crate::solvers::MAX_NODES
            )));
        }
        Ok(())
    }
}

/// An instance together with the side data some problems need.
#[derive(Debug, Clone)]
pub struct Instance {
    pub data: ProblemInstance,
    /// Terminal nodes, in position order (Steiner tree only).
    pub terminals: Vec<usize>,
    /// Weight budget `t` (Steiner tree only).
    pub budget: Option<usize>,
}

impl Instance {
    pub fn new(data: ProblemInstance) -> Self {
        Self {
            data,
            terminals: Vec::new(),
            budget: None,
        }
    }

    pub fn with_terminals(mut self, terminals: Vec<usize>) -> Self {
        self.terminals = terminals;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }
}

impl From<ProblemInstance> for Instance {
    fn from(data: ProblemInstance) -> Self {
        Self::new(data)
    }
}

/// Bijection between variable keys and indices `0..s`.
#[derive(Debug, Clone, Default)]
pub struct Legend {
    keys: Vec<VariableKey>,
    index: HashMap<VariableKey, u32>,
}

impl Legend {
    fn push(&mut self, key: VariableKey) {
        let id = self.keys.len() as u32;
        let fresh = self.index.insert(key.clone(), id).is_none();
        debug_assert!(fresh, "duplicate key {key}");
        self.keys.push(key);
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[VariableKey] {
        &self.keys
    }

    pub fn get(&self, key: &VariableKey) -> Option<u32> {
        self.index.get(key).copied()
    }

    /// Index of a key the generator knows is present.
    fn id(&self, key: &VariableKey) -> u32 {
        match self.index.get(key) {
            Some(&i) => i,
            None => panic!("formulation references unregistered key {key}"),
        }
    }

    /// Evaluates `value` on every key, in index order.
    fn assign<F>(&self, value: F) -> Result<Vec<bool>>
    where
        F: Fn(&VariableKey) -> Result<bool> + Sync + Send,
    {
        par::map(&self.keys, value).into_iter().collect()
    }
}

/// Monomial set keyed by sorted variable multisets.
#[derive(Debug, Default)]
struct Terms {
    set: HashSet<SmallVec<[u32; 6]>>,
}

impl Terms {
    fn add(&mut self, vars: &[u32]) {
        let mut key: SmallVec<[u32; 6]> = SmallVec::from_slice(vars);
        key.sort_unstable();
        self.set.insert(key);
    }

    fn absorb(&mut self, other: Terms) {
        if self.set.len() < other.set.len() {
            let mine = std::mem::replace(&mut self.set, other.set);
            self.set.extend(mine);
        } else {
            self.set.extend(other.set);
        }
    }

    /// Runs one enumeration task per item (in parallel when enabled) and
    /// merges the partial sums.
    fn gather<T, F>(tasks: &[T], f: F) -> Terms
    where
        T: Sync,
        F: Fn(&T, &mut Terms) + Sync + Send,
    {
        let parts = par::map(tasks, |t| {
            let mut acc = Terms::default();
            f(t, &mut acc);
            acc
        });
        let mut total = Terms::default();
        for p in parts {
            total.absorb(p);
        }
        total
    }

    fn into_polynomial(self, nvars: usize, delta: u32) -> Result<SparsePolynomial> {
        let mut terms: Vec<(Monomial, BigInt)> = self
            .set
            .into_iter()
            .map(|vars| (Monomial::from_vars(vars), BigInt::one()))
            .collect();
        if let Some((m, _)) = terms.iter().find(|(m, _)| m.degree() > delta) {
            return Err(Error::Invariant(format!(
                "monomial {m} exceeds the declared degree {delta}"
            )));
        }
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(SparsePolynomial::from_canonical(nvars, delta, None, terms))
    }
}

/// Per-problem generator: legend, monomials and assignment map.
trait Generator: Send + Sync {
    fn delta(&self) -> u32;
    fn legend(&self) -> Legend;
    fn monomials(&self, legend: &Legend) -> Terms;
    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>>;
    fn splitter(&self) -> Option<&SplitterFamily> {
        None
    }
}

fn generator(problem: Problem, params: &Params) -> Result<Box<dyn Generator>> {
    params.check_for(problem)?;
    Ok(match problem {
        Problem::HamPath => Box::new(exact::HamPath::new(params)?),
        Problem::IndependentSet | Problem::Clique | Problem::VertexCover => {
            Box::new(exact::IndependentSet::new(problem, params)?)
        }
        Problem::MaxKSat | Problem::KSat => Box::new(exact::MaxSat::new(problem, params)?),
        Problem::Coloring => Box::new(exact::Coloring::new(params)?),
        Problem::SetCover => Box::new(exact::SetCover::new(params)?),
        Problem::Matching3d => Box::new(exact::Matching3d::new(params)?),
        Problem::KVertexCover => Box::new(param::KVertexCover::new(params)?),
        Problem::KSteinerTree => Box::new(param::SteinerTree::new(params)?),
        Problem::KInternalSpanningTree | Problem::KLeafSpanningTree => {
            Box::new(param::SpanningTree::new(problem, params)?)
        }
        Problem::KNonblocker => Box::new(param::Nonblocker::new(params)?),
        Problem::KSetSplitting => Box::new(param::SetSplitting::new(params)?),
        Problem::KPath => Box::new(kpath::KPath::new(params)?),
    })
}

/// Everything about a formulation except its polynomial: enough to compute
/// assignments.
pub struct Layout {
    problem: Problem,
    params: Params,
    delta: u32,
    legend: Legend,
    engine: Box<dyn Generator>,
}

impl fmt::Debug for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Layout")
            .field("problem", &self.problem)
            .field("params", &self.params)
            .field("delta", &self.delta)
            .field("s", &self.legend.len())
            .finish()
    }
}

impl Layout {
    pub fn new(problem: Problem, params: &Params) -> Result<Self> {
        let engine = generator(problem, params)?;
        Ok(Self {
            problem,
            params: params.clone(),
            delta: engine.delta(),
            legend: engine.legend(),
            engine,
        })
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn theta(&self) -> usize {
        self.params.theta
    }

    /// Declared degree bound `Δ(θ)`.
    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Number of variables.
    pub fn s(&self) -> usize {
        self.legend.len()
    }

    pub fn legend(&self) -> &Legend {
        &self.legend
    }

    /// The coloring family a `k-path` formulation ranges over.
    pub fn splitter(&self) -> Option<&SplitterFamily> {
        self.engine.splitter()
    }

    /// The 0/1 point `φ(instance)`, aligned with the legend.
    pub fn assign(&self, instance: &Instance) -> Result<Vec<bool>> {
        let values = self.engine.assign(&self.legend, instance)?;
        debug_assert_eq!(values.len(), self.s());
        Ok(values)
    }
}

/// Legend, polynomial and metadata of one formulation.
#[derive(Debug)]
pub struct FormulationOutput {
    pub layout: Layout,
    pub poly: SparsePolynomial,
}

impl FormulationOutput {
    pub fn problem(&self) -> Problem {
        self.layout.problem
    }

    pub fn theta(&self) -> usize {
        self.layout.theta()
    }

    pub fn delta(&self) -> u32 {
        self.layout.delta
    }

    pub fn s(&self) -> usize {
        self.layout.s()
    }

    /// Monomial count, which bounds the value at any 0/1 point.
    pub fn monomials(&self) -> usize {
        self.poly.len()
    }

    pub fn assign(&self, instance: &Instance) -> Result<Vec<bool>> {
        self.layout.assign(instance)
    }

    /// `P(φ)`, the number of monomials whose variables are all set.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<BigInt> {
        self.poly.eval_binary(assignment)
    }

    pub fn decide(&self, assignment: &[bool]) -> Result<bool> {
        Ok(!self.evaluate(assignment)?.is_zero())
    }

    /// Number of variables once the formulation is placed at its global
    /// index: `s' = cantor_pair(s, k)`, with `s' - s` dummy variables.
    pub fn padded_nvars(&self) -> Option<u128> {
        let k = self.layout.params.k?;
        self.problem()
            .is_parameterized()
            .then(|| param_index(self.s() as u64, k as u64))
    }
}

/// Builds the full formulation for `problem` at `params`.
pub fn formulate(problem: Problem, params: &Params) -> Result<FormulationOutput> {
    let layout = Layout::new(problem, params)?;
    let terms = layout.engine.monomials(&layout.legend);
    let poly = terms.into_polynomial(layout.s(), layout.delta)?;
    Ok(FormulationOutput { layout, poly })
}

/// Global index of a parameterized formulation with `s` variables and
/// parameter `k`.
pub fn param_index(s: u64, k: u64) -> u128 {
    cantor_pair(s, k)
}

// Shared enumeration helpers.

/// `θ` contiguous blocks of size `⌈n/θ⌉` (trailing blocks may be short or
/// empty).
fn contiguous_blocks(n: usize, theta: usize) -> Vec<Mask> {
    let b = ceil_div(n, theta);
    (0..theta)
        .map(|i| {
            let lo = (i * b).min(n);
            let hi = ((i + 1) * b).min(n);
            full(hi) & !full(lo)
        })
        .collect()
}

/// Splits `set` into consecutive chunks of `b` elements in increasing order.
fn sorted_chunks(set: Mask, b: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    let mut cur: Mask = 0;
    for e in crate::bits::elements(set) {
        cur |= bit(e);
        if popcount(cur) as usize == b {
            out.push(cur);
            cur = 0;
        }
    }
    if cur != 0 {
        out.push(cur);
    }
    out
}

/// Submasks of `universe` with size in `lo..=hi`, ordered by size and then
/// numerically.
fn subsets_sized(universe: Mask, lo: usize, hi: usize) -> Vec<Mask> {
    let mut out: Vec<Mask> = crate::bits::submasks(universe)
        .into_iter()
        .filter(|&s| (lo..=hi).contains(&(popcount(s) as usize)))
        .collect();
    out.sort_by_key(|&s| (popcount(s), s));
    out
}

/// Ordered tuples of `parts` nonnegative integers, each at most `cap`,
/// summing to `total`. Lexicographic order.
fn compositions(total: usize, parts: usize, cap: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, parts: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if left > parts * cap {
            return;
        }
        for x in 0..=left.min(cap) {
            cur.push(x);
            go(left - x, parts - 1, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, cap, &mut Vec::new(), &mut out);
    out
}

/// Calls `visit` for every way to give each element of `universe` one of
/// `labels` labels (or, with `allow_none`, no label) such that each label
/// class has at most `cap` elements. The slice holds one mask per label.
fn labelings(
    universe: Mask,
    labels: usize,
    cap: usize,
    allow_none: bool,
    visit: &mut dyn FnMut(&[Mask]),
) {
    label_rest(universe, cap, allow_none, &mut vec![0; labels], visit);
}

fn label_rest(
    rest: Mask,
    cap: usize,
    allow_none: bool,
    classes: &mut [Mask],
    visit: &mut dyn FnMut(&[Mask]),
) {
    if rest == 0 {
        visit(classes);
        return;
    }
    let e = rest.trailing_zeros() as usize;
    let rest = rest & !bit(e);
    for i in 0..classes.len() {
        if (popcount(classes[i]) as usize) < cap {
            classes[i] |= bit(e);
            label_rest(rest, cap, allow_none, classes, visit);
            classes[i] &= !bit(e);
        }
    }
    if allow_none {
        label_rest(rest, cap, allow_none, classes, visit);
    }
}

/// [`labelings`] feeding a [`Terms`] accumulator, split into parallel tasks
/// on the labels of the two smallest elements.
fn gather_labelings<F>(universe: Mask, labels: usize, cap: usize, allow_none: bool, f: F) -> Terms
where
    F: Fn(&[Mask], &mut Terms) + Sync + Send,
{
    let head: Mask = crate::bits::elements(universe)
        .take(2)
        .fold(0, |acc, e| acc | bit(e));
    let mut seeds = Vec::new();
    labelings(head, labels, cap, allow_none, &mut |classes| {
        seeds.push(classes.to_vec())
    });
    Terms::gather(&seeds, |seed, out| {
        let mut classes = seed.clone();
        label_rest(universe & !head, cap, allow_none, &mut classes, &mut |c| {
            f(c, out)
        });
    })
}

fn graph_for(problem: Problem, instance: &Instance, n: usize) -> Result<&Graph> {
    match &instance.data {
        ProblemInstance::Graph(g) if g.n() == n => Ok(g),
        ProblemInstance::Graph(g) => Err(size_mismatch("node count", n, g.n())),
        other => Err(wrong_instance(problem, other)),
    }
}

fn family_for(problem: Problem, instance: &Instance, n: usize, m: usize) -> Result<&SetFamily> {
    match &instance.data {
        ProblemInstance::Family(f) if f.n != n => Err(size_mismatch("universe size", n, f.n)),
        ProblemInstance::Family(f) if f.sets.len() > m => Err(Error::param(format!(
            "instance has {} sets, formulation allows at most {m}",
            f.sets.len()
        ))),
        ProblemInstance::Family(f) => Ok(f),
        other => Err(wrong_instance(problem, other)),
    }
}

fn wrong_instance(problem: Problem, got: &ProblemInstance) -> Error {
    Error::param(format!(
        "{problem} expects a different instance kind, got {}",
        got.kind()
    ))
}

fn size_mismatch(what: &str, expected: usize, got: usize) -> Error {
    Error::param(format!(
        "instance {what} is {got}, formulation expects {expected}"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_tags_round_trip() {
        for p in Problem::ALL {
            assert_eq!(p.tag().parse::<Problem>().unwrap(), p);
        }
        assert!("k-tree".parse::<Problem>().is_err());
    }

    #[test]
    fn params_validate_per_problem() {
        let p = Params::new(4, 2);
        assert!(p.check_for(Problem::HamPath).is_ok());
        assert!(p.check_for(Problem::IndependentSet).is_err());
        assert!(p
            .clone()
            .with("t", 1)
            .unwrap()
            .check_for(Problem::HamPath)
            .is_err());
        assert!(Params::new(4, 1).check_for(Problem::HamPath).is_err());
    }

    #[test]
    fn block_and_chunk_helpers() {
        assert_eq!(contiguous_blocks(5, 2), vec![0b00111, 0b11000]);
        assert_eq!(contiguous_blocks(4, 3), vec![0b0011, 0b1100, 0]);
        assert_eq!(
            sorted_chunks(0b1011_0110, 2),
            vec![0b0110, 0b11_0000, 0b1000_0000]
        );
        assert_eq!(
            compositions(2, 2, 2),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(compositions(3, 2, 1), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn labelings_respect_caps() {
        let mut count = 0;
        labelings(0b111, 2, 2, false, &mut |c| {
            assert!(c.iter().all(|m| popcount(*m) <= 2));
            count += 1;
        });
        assert_eq!(count, 6);
        let mut with_none = 0;
        labelings(0b11, 1, 1, true, &mut |_| with_none += 1);
        assert_eq!(with_none, 3);
    }

    #[test]
    fn param_index_matches_pairing() {
        assert_eq!(param_index(5, 2), 30);
        assert_eq!(param_index(4, 0), 10);
    }
}
