//! Formulations sized by `n` alone: Hamiltonian path, independent set
//! (with clique and vertex cover), MAX-k-SAT, coloring, set cover and
//! 3d-matching.

use super::{
    compositions, contiguous_blocks, family_for, gather_labelings, graph_for, labelings,
    size_mismatch, sorted_chunks, subsets_sized, wrong_instance, Generator, Instance, Legend,
    Params, Problem, Terms, VariableKey,
};
use crate::bits::{
    bit, ceil_div, combinations, elements, from_iter, full, popcount, submasks, Mask,
};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::solvers::{
    chromatic_number, ham_path_ends, is_independent, matching3d_max, sat_count_restricted,
    set_cover_min, CnfFormula, ProblemInstance,
};

/// Largest `n` these formulations enumerate (their monomial counts grow
/// like `c^n`).
pub const EXACT_N_CAP: usize = 12;

fn check_n(n: usize) -> Result<()> {
    if n > EXACT_N_CAP {
        return Err(Error::param(format!(
            "n = {n} exceeds the desk-scale cap {EXACT_N_CAP}"
        )));
    }
    Ok(())
}

fn check_target(t: usize, n: usize) -> Result<()> {
    if t > n {
        return Err(Error::param(format!("target t = {t} exceeds n = {n}")));
    }
    Ok(())
}

/// Ordered tuples of pairwise disjoint subsets of `universe`, each larger
/// than `b`, of every length up to `max_len` (the empty tuple included).
fn large_class_tuples(universe: Mask, b: usize, max_len: usize) -> Vec<Vec<Mask>> {
    fn go(rest: Mask, b: usize, left: usize, cur: &mut Vec<Mask>, out: &mut Vec<Vec<Mask>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for t in subsets_sized(rest, b + 1, popcount(rest) as usize) {
            cur.push(t);
            go(rest & !t, b, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(universe, b, max_len, &mut Vec::new(), &mut out);
    out
}

// Hamiltonian path.

/// Blocks of size `b = ⌈n/θ⌉` (the last one possibly smaller) visited in
/// path order; each block carries its entry node and the next block's entry
/// node, or the end sentinel for the last block.
pub(super) struct HamPath {
    n: usize,
    theta: usize,
    sizes: Vec<usize>,
}

impl HamPath {
    pub(super) fn new(p: &Params) -> Result<Self> {
        let (n, theta) = (p.n, p.theta);
        if n < theta {
            return Err(Error::param(format!(
                "ham-path needs n ≥ theta, got n={n} theta={theta}"
            )));
        }
        check_n(n)?;
        let b = ceil_div(n, theta);
        let m = ceil_div(n, b);
        let mut sizes = vec![b; m - 1];
        sizes.push(n - (m - 1) * b);
        Ok(Self { n, theta, sizes })
    }

    fn walk(
        &self,
        legend: &Legend,
        blocks: &[Mask],
        i: usize,
        start: usize,
        vars: &mut Vec<u32>,
        out: &mut Terms,
    ) {
        let s = blocks[i];
        if i + 1 == blocks.len() {
            let exits = elements(full(self.n) & !s).map(Some).chain([None]);
            for v in exits {
                vars.push(legend.id(&VariableKey::HamSeg { s, u: start, v }));
                out.add(vars);
                vars.pop();
            }
            return;
        }
        for next in elements(blocks[i + 1]) {
            vars.push(legend.id(&VariableKey::HamSeg {
                s,
                u: start,
                v: Some(next),
            }));
            self.walk(legend, blocks, i + 1, next, vars, out);
            vars.pop();
        }
    }

    fn partitions(
        &self,
        rest: Mask,
        i: usize,
        cur: &mut Vec<Mask>,
        visit: &mut dyn FnMut(&[Mask]),
    ) {
        if i == self.sizes.len() {
            visit(cur);
            return;
        }
        for s in subsets_sized(rest, self.sizes[i], self.sizes[i]) {
            cur.push(s);
            self.partitions(rest & !s, i + 1, cur, visit);
            cur.pop();
        }
    }
}

impl Generator for HamPath {
    fn delta(&self) -> u32 {
        self.theta as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        let last = *self.sizes.last().expect("at least one block");
        let mut distinct = vec![self.sizes[0], last];
        distinct.sort_unstable();
        distinct.dedup();
        for size in distinct {
            for s in subsets_sized(full(self.n), size, size) {
                for u in elements(s) {
                    for v in elements(full(self.n) & !s) {
                        legend.push(VariableKey::HamSeg { s, u, v: Some(v) });
                    }
                    if size == last {
                        legend.push(VariableKey::HamSeg { s, u, v: None });
                    }
                }
            }
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let first = subsets_sized(full(self.n), self.sizes[0], self.sizes[0]);
        Terms::gather(&first, |&s1, out| {
            let mut cur = vec![s1];
            self.partitions(full(self.n) & !s1, 1, &mut cur, &mut |blocks| {
                for start in elements(blocks[0]) {
                    self.walk(legend, blocks, 0, start, &mut Vec::new(), out);
                }
            });
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let g = graph_for(Problem::HamPath, instance, self.n)?;
        legend.assign(|key| match *key {
            VariableKey::HamSeg { s, u, v } => {
                let ends = ham_path_ends(g, s, u);
                Ok(match v {
                    Some(v) => ends & g.in_neighbors(v) != 0,
                    None => ends != 0,
                })
            }
            _ => unreachable!("foreign key {key}"),
        })
    }
}

// Independent set, clique, vertex cover.

/// Up to `θ` disjoint parts of size at most `⌈n/θ⌉` whose pairwise unions
/// are independent. Clique runs on the complement graph; vertex cover asks
/// for an independent set of size `n - t`.
pub(super) struct IndependentSet {
    problem: Problem,
    n: usize,
    theta: usize,
    b: usize,
    size: usize,
}

impl IndependentSet {
    pub(super) fn new(problem: Problem, p: &Params) -> Result<Self> {
        let t = p.t.expect("checked");
        check_target(t, p.n)?;
        check_n(p.n)?;
        let size = if problem == Problem::VertexCover {
            p.n - t
        } else {
            t
        };
        Ok(Self {
            problem,
            n: p.n,
            theta: p.theta,
            b: ceil_div(p.n, p.theta),
            size,
        })
    }
}

impl Generator for IndependentSet {
    fn delta(&self) -> u32 {
        (self.theta * (self.theta - 1) / 2) as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        for s in subsets_sized(full(self.n), 1, (2 * self.b).min(self.n)) {
            legend.push(VariableKey::IndepSet { s });
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        gather_labelings(full(self.n), self.theta, self.b, true, |parts, out| {
            if parts.iter().map(|&p| popcount(p) as usize).sum::<usize>() != self.size {
                return;
            }
            let mut vars = SmallVec::<[u32; 8]>::new();
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    let s = parts[i] | parts[j];
                    if s != 0 {
                        vars.push(legend.id(&VariableKey::IndepSet { s }));
                    }
                }
            }
            out.add(&vars);
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let g = graph_for(self.problem, instance, self.n)?;
        let g = if self.problem == Problem::Clique {
            g.complement()
        } else {
            g.clone()
        };
        legend.assign(|key| match *key {
            VariableKey::IndepSet { s } => Ok(is_independent(&g, s)),
            _ => unreachable!("foreign key {key}"),
        })
    }
}

// MAX-k-SAT and k-SAT.

/// Variables split into `θ` contiguous blocks; each clause is charged to a
/// fixed `k`-set of blocks covering its variables, and a witness is a full
/// assignment plus a split of the target `t` among the `k`-sets.
pub(super) struct MaxSat {
    problem: Problem,
    n: usize,
    k: usize,
    t: usize,
    m: Option<usize>,
    blocks: Vec<Mask>,
    block_sets: Vec<Mask>,
}

impl MaxSat {
    pub(super) fn new(problem: Problem, p: &Params) -> Result<Self> {
        let k = p.k.expect("checked");
        if k == 0 || k > p.theta {
            return Err(Error::param(format!(
                "{problem} needs 1 ≤ k ≤ theta, got k={k} theta={}",
                p.theta
            )));
        }
        check_n(p.n)?;
        let (t, m) = match problem {
            Problem::KSat => (p.m.expect("checked"), p.m),
            _ => (p.t.expect("checked"), p.m),
        };
        if let Some(m) = m {
            if t > m {
                return Err(Error::param(format!("target t = {t} exceeds m = {m}")));
            }
        }
        let block_sets = combinations(p.theta, k)
            .into_iter()
            .map(from_iter)
            .collect();
        Ok(Self {
            problem,
            n: p.n,
            k,
            t,
            m,
            blocks: contiguous_blocks(p.n, p.theta),
            block_sets,
        })
    }

    fn vars_of(&self, block_set: Mask) -> Mask {
        elements(block_set).fold(0, |acc, i| acc | self.blocks[i])
    }

    /// The block set a clause is charged to: the blocks holding its
    /// variables, padded with the smallest other block indices.
    fn charge(&self, f: &CnfFormula, c: usize) -> Mask {
        let vars = f.clause_vars(c);
        let mut hit: Mask = (0..self.blocks.len())
            .filter(|&i| self.blocks[i] & vars != 0)
            .fold(0, |acc, i| acc | bit(i));
        let mut i = 0;
        while (popcount(hit) as usize) < self.k {
            hit |= bit(i);
            i += 1;
        }
        hit
    }
}

impl Generator for MaxSat {
    fn delta(&self) -> u32 {
        self.block_sets.len() as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        for &blocks in &self.block_sets {
            for tau in submasks(self.vars_of(blocks)) {
                for r in 0..=self.t {
                    legend.push(VariableKey::MaxSat { blocks, tau, r });
                }
            }
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let splits = compositions(self.t, self.block_sets.len(), self.t);
        let scopes: Vec<Mask> = self.block_sets.iter().map(|&b| self.vars_of(b)).collect();
        Terms::gather(&splits, |split, out| {
            let mut vars = Vec::with_capacity(split.len());
            for mu in 0..(1u64 << self.n) {
                vars.clear();
                for (j, &blocks) in self.block_sets.iter().enumerate() {
                    let tau = mu & scopes[j];
                    vars.push(legend.id(&VariableKey::MaxSat {
                        blocks,
                        tau,
                        r: split[j],
                    }));
                }
                out.add(&vars);
            }
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let f = match &instance.data {
            ProblemInstance::Cnf(f) => f,
            other => return Err(wrong_instance(self.problem, other)),
        };
        if f.nvars > self.n {
            return Err(size_mismatch("variable count", self.n, f.nvars));
        }
        if f.width() > self.k {
            return Err(Error::param(format!(
                "clause width {} exceeds k = {}",
                f.width(),
                self.k
            )));
        }
        match (self.problem, self.m) {
            (Problem::KSat, Some(m)) if f.clauses.len() != m => {
                return Err(size_mismatch("clause count", m, f.clauses.len()));
            }
            (_, Some(m)) if f.clauses.len() > m => {
                return Err(size_mismatch("clause count", m, f.clauses.len()));
            }
            _ => {}
        }
        let charged: Vec<Mask> = (0..f.clauses.len()).map(|c| self.charge(f, c)).collect();
        let owned = |blocks: Mask| -> Vec<usize> {
            (0..charged.len())
                .filter(|&c| charged[c] == blocks)
                .collect()
        };
        let per_set: Vec<(Mask, Vec<usize>)> =
            self.block_sets.iter().map(|&b| (b, owned(b))).collect();
        legend.assign(|key| match *key {
            VariableKey::MaxSat { blocks, tau, r } => {
                let clauses = &per_set
                    .iter()
                    .find(|(b, _)| *b == blocks)
                    .expect("known block set")
                    .1;
                Ok(sat_count_restricted(f, clauses, tau) >= r)
            }
            _ => unreachable!("foreign key {key}"),
        })
    }
}

// Graph coloring.

/// Large color classes (more than `⌈n/θ⌉` nodes) are certified through
/// pairwise unions of their chunks; the rest of the graph is split into
/// `θ` parts of at most `2⌈n/θ⌉` nodes, each with its own color budget.
pub(super) struct Coloring {
    n: usize,
    theta: usize,
    t: usize,
    b: usize,
    cap: usize,
}

impl Coloring {
    pub(super) fn new(p: &Params) -> Result<Self> {
        let t = p.t.expect("checked");
        if t == 0 {
            return Err(Error::param("coloring needs t ≥ 1"));
        }
        check_target(t, p.n)?;
        check_n(p.n)?;
        let b = ceil_div(p.n, p.theta);
        Ok(Self {
            n: p.n,
            theta: p.theta,
            t,
            b,
            cap: (2 * b).min(p.n),
        })
    }

    fn certificate(&self, legend: &Legend, large: Mask, vars: &mut Vec<u32>) {
        let chunks = sorted_chunks(large, self.b);
        for i in 0..chunks.len() {
            for j in i + 1..chunks.len() {
                vars.push(legend.id(&VariableKey::ColorIndep {
                    s: chunks[i] | chunks[j],
                }));
            }
        }
    }
}

impl Generator for Coloring {
    fn delta(&self) -> u32 {
        (2 * self.theta * self.theta + self.theta) as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        let sets = subsets_sized(full(self.n), 1, self.cap);
        for &s in &sets {
            for r in 0..=self.t {
                legend.push(VariableKey::ColorBudget { s, r });
            }
        }
        for &s in &sets {
            legend.push(VariableKey::ColorIndep { s });
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let tuples = large_class_tuples(full(self.n), self.b, self.theta.min(self.t));
        Terms::gather(&tuples, |large, out| {
            let mut base = Vec::new();
            for &l in large {
                self.certificate(legend, l, &mut base);
            }
            let rest = full(self.n) & !large.iter().fold(0, |a, &l| a | l);
            let budgets = compositions(self.t - large.len(), self.theta, self.t);
            let mut vars = Vec::new();
            labelings(rest, self.theta, self.cap, false, &mut |parts| {
                for split in &budgets {
                    vars.clear();
                    vars.extend_from_slice(&base);
                    for (i, &s) in parts.iter().enumerate() {
                        if s != 0 {
                            vars.push(legend.id(&VariableKey::ColorBudget { s, r: split[i] }));
                        }
                    }
                    out.add(&vars);
                }
            });
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let g = graph_for(Problem::Coloring, instance, self.n)?;
        legend.assign(|key| match *key {
            VariableKey::ColorBudget { s, r } => Ok(chromatic_number(g, s)? <= r),
            VariableKey::ColorIndep { s } => Ok(is_independent(g, s)),
            _ => unreachable!("foreign key {key}"),
        })
    }
}

// Set cover.

/// Universe split like coloring: elements covered by a single large set are
/// certified chunk by chunk against one family index, and the remainder is
/// split into `θ` parts with individual budgets.
pub(super) struct SetCover {
    n: usize,
    m: usize,
    theta: usize,
    t: usize,
    b: usize,
    cap: usize,
}

impl SetCover {
    pub(super) fn new(p: &Params) -> Result<Self> {
        check_n(p.n)?;
        let b = ceil_div(p.n, p.theta);
        Ok(Self {
            n: p.n,
            m: p.m.expect("checked"),
            theta: p.theta,
            t: p.t.expect("checked"),
            b,
            cap: (2 * b).min(p.n),
        })
    }
}

/// Ordered tuples of `len` distinct indices from `0..m`.
fn arrangements(m: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for q in 0..m {
            if !cur.contains(&q) {
                cur.push(q);
                go(m, len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(m, len, &mut Vec::new(), &mut out);
    out
}

impl Generator for SetCover {
    fn delta(&self) -> u32 {
        ((self.theta + 1) * self.theta) as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        let sets = subsets_sized(full(self.n), 1, self.cap);
        for &s in &sets {
            for r in 0..=self.t {
                legend.push(VariableKey::Cover { s, r });
            }
        }
        for &s in &sets {
            for i in 0..self.m {
                legend.push(VariableKey::CoverIn { s, i });
            }
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let max_len = self.theta.min(self.t).min(self.m);
        let tasks: Vec<(Vec<Mask>, Vec<usize>)> = large_class_tuples(full(self.n), self.b, max_len)
            .into_iter()
            .flat_map(|large| {
                arrangements(self.m, large.len())
                    .into_iter()
                    .map(move |q| (large.clone(), q))
            })
            .collect();
        Terms::gather(&tasks, |(large, owners), out| {
            let mut base = Vec::new();
            for (&l, &q) in large.iter().zip(owners) {
                for chunk in sorted_chunks(l, self.b) {
                    base.push(legend.id(&VariableKey::CoverIn { s: chunk, i: q }));
                }
            }
            let rest = full(self.n) & !large.iter().fold(0, |a, &l| a | l);
            let budgets = compositions(self.t - large.len(), self.theta, self.t);
            let mut vars = Vec::new();
            labelings(rest, self.theta, self.cap, false, &mut |parts| {
                for split in &budgets {
                    vars.clear();
                    vars.extend_from_slice(&base);
                    for (i, &s) in parts.iter().enumerate() {
                        if s != 0 {
                            vars.push(legend.id(&VariableKey::Cover { s, r: split[i] }));
                        }
                    }
                    out.add(&vars);
                }
            });
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let f = family_for(Problem::SetCover, instance, self.n, self.m)?;
        legend.assign(|key| match *key {
            VariableKey::Cover { s, r } => Ok(set_cover_min(f, s)?.is_some_and(|c| c <= r)),
            VariableKey::CoverIn { s, i } => Ok(f.sets.get(i).is_some_and(|&set| s & !set == 0)),
            _ => unreachable!("foreign key {key}"),
        })
    }
}

// 3d-matching.

/// `θ` vertex-disjoint sub-matchings of at most `⌈n/θ⌉` triples each.
pub(super) struct Matching3d {
    n: usize,
    theta: usize,
    t: usize,
    b: usize,
}

impl Matching3d {
    pub(super) fn new(p: &Params) -> Result<Self> {
        let t = p.t.expect("checked");
        check_target(t, p.n)?;
        check_n(p.n)?;
        Ok(Self {
            n: p.n,
            theta: p.theta,
            t,
            b: ceil_div(p.n, p.theta),
        })
    }

    fn pick(
        &self,
        legend: &Legend,
        sizes: &[usize],
        free: (Mask, Mask, Mask),
        vars: &mut Vec<u32>,
        out: &mut Terms,
    ) {
        let Some((&j, rest)) = sizes.split_first() else {
            out.add(vars);
            return;
        };
        if j == 0 {
            self.pick(legend, rest, free, vars, out);
            return;
        }
        for a in subsets_sized(free.0, j, j) {
            for b in subsets_sized(free.1, j, j) {
                for c in subsets_sized(free.2, j, j) {
                    vars.push(legend.id(&VariableKey::Matching { a, b, c }));
                    self.pick(
                        legend,
                        rest,
                        (free.0 & !a, free.1 & !b, free.2 & !c),
                        vars,
                        out,
                    );
                    vars.pop();
                }
            }
        }
    }
}

impl Generator for Matching3d {
    fn delta(&self) -> u32 {
        self.theta as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        for j in 1..=self.b {
            let side = subsets_sized(full(self.n), j, j);
            for &a in &side {
                for &b in &side {
                    for &c in &side {
                        legend.push(VariableKey::Matching { a, b, c });
                    }
                }
            }
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let splits = compositions(self.t, self.theta, self.b);
        let all = full(self.n);
        Terms::gather(&splits, |sizes, out| {
            self.pick(legend, sizes, (all, all, all), &mut Vec::new(), out);
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let h = match &instance.data {
            ProblemInstance::Hyper(h) if h.n == self.n => h,
            ProblemInstance::Hyper(h) => return Err(size_mismatch("part size", self.n, h.n)),
            other => return Err(wrong_instance(Problem::Matching3d, other)),
        };
        legend.assign(|key| match *key {
            VariableKey::Matching { a, b, c } => {
                Ok(matching3d_max(h, a, b, c) == popcount(a) as usize)
            }
            _ => unreachable!("foreign key {key}"),
        })
    }
}
