//! Formulations parameterized by `k`: vertex cover, Steiner tree, the two
//! spanning tree problems, nonblocker and set splitting.

use std::collections::HashMap;

use smallvec::SmallVec;

use super::{
    contiguous_blocks, family_for, gather_labelings, graph_for, labelings, size_mismatch,
    subsets_sized, Generator, Instance, Legend, Params, Problem, Terms, VariableKey,
};
use crate::bits::{ceil_div, elements, full, popcount, submasks, Mask};
use crate::error::{Error, Result};
use crate::par;
use crate::solvers::{
    dominated_check, spanning_tree_internal_max, spanning_tree_leaf_max, split_check,
    steiner_tree_min, subset_graph, Graph,
};

/// Largest `n` the enumerations here accept.
pub const PARAM_N_CAP: usize = 12;

/// Vertex cover allows a larger `n`: its witnesses are just the small sets.
pub const VERTEX_COVER_N_CAP: usize = 16;

fn check_n(problem: Problem, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::param(format!(
            "{problem}: n = {n} exceeds the desk-scale cap {cap}"
        )));
    }
    Ok(())
}

fn check_k(problem: Problem, k: usize, limit: usize, what: &str) -> Result<()> {
    if k > limit {
        return Err(Error::param(format!(
            "{problem}: k = {k} exceeds {what} = {limit}"
        )));
    }
    Ok(())
}

/// Size bound for one piece of a tree cut into at most `θ` pieces that
/// share at most `θ - 1` nodes in total.
fn piece_cap(total: usize, theta: usize) -> usize {
    total.min((ceil_div(3 * total, theta)).max(ceil_div(2 * total, theta - 1) + 1))
}

// k-vertex cover.

/// Contiguous blocks `V_1..V_θ`; a cover `S` of size at most `k` is
/// witnessed by its traces on every pair of blocks.
pub(super) struct KVertexCover {
    n: usize,
    theta: usize,
    k: usize,
    blocks: Vec<Mask>,
}

impl KVertexCover {
    pub(super) fn new(p: &Params) -> Result<Self> {
        let k = p.k.expect("checked");
        check_n(Problem::KVertexCover, p.n, VERTEX_COVER_N_CAP)?;
        check_k(Problem::KVertexCover, k, p.n, "n")?;
        Ok(Self {
            n: p.n,
            theta: p.theta,
            k,
            blocks: contiguous_blocks(p.n, p.theta),
        })
    }
}

impl Generator for KVertexCover {
    fn delta(&self) -> u32 {
        (self.theta * self.theta) as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        for i in 0..self.theta {
            for j in i + 1..self.theta {
                for a in submasks(self.blocks[i]) {
                    for b in submasks(self.blocks[j]) {
                        legend.push(VariableKey::VertexCover { i, j, a, b });
                    }
                }
            }
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let covers = subsets_sized(full(self.n), 0, self.k);
        Terms::gather(&covers, |&s, out| {
            let mut vars = SmallVec::<[u32; 8]>::new();
            for i in 0..self.theta {
                for j in i + 1..self.theta {
                    let (a, b) = (s & self.blocks[i], s & self.blocks[j]);
                    vars.push(legend.id(&VariableKey::VertexCover { i, j, a, b }));
                }
            }
            out.add(&vars);
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let g = graph_for(Problem::KVertexCover, instance, self.n)?;
        legend.assign(|key| match *key {
            VariableKey::VertexCover { i, j, a, b } => {
                let span = self.blocks[i] | self.blocks[j];
                let cover = a | b;
                Ok(g.edges().iter().all(|&(u, v, _)| {
                    let inside = span >> u & 1 == 1 && span >> v & 1 == 1;
                    !inside || cover >> u & 1 == 1 || cover >> v & 1 == 1
                }))
            }
            _ => unreachable!("foreign key {key}"),
        })
    }
}

// k-Steiner tree.

/// A Steiner tree cut into at most `θ` pieces. Each piece names the
/// terminal positions it covers, the connector nodes it shares with other
/// pieces and its weight; a budget variable carries the total weight.
///
/// Pieces form a multiset, so each witness lists them in non-decreasing
/// key order.
pub(super) struct SteinerTree {
    n: usize,
    theta: usize,
    k: usize,
    w: usize,
    terminal_cap: usize,
}

impl SteinerTree {
    pub(super) fn new(p: &Params) -> Result<Self> {
        let k = p.k.expect("checked");
        let w = p.w.expect("checked");
        check_n(Problem::KSteinerTree, p.n, PARAM_N_CAP)?;
        if k == 0 {
            return Err(Error::param("k-steiner needs at least one terminal"));
        }
        check_k(Problem::KSteinerTree, k, p.n, "n")?;
        Ok(Self {
            n: p.n,
            theta: p.theta,
            k,
            w,
            terminal_cap: piece_cap(k, p.theta),
        })
    }

    fn connector_sets(&self) -> Vec<Mask> {
        subsets_sized(full(self.n), 0, self.theta - 1)
    }

    /// Piece keys in legend order: connector set, then terminal set, then
    /// weight.
    fn pieces(&self) -> Vec<(Mask, Mask, usize)> {
        let terms = subsets_sized(full(self.k), 0, self.terminal_cap);
        let mut out = Vec::new();
        for a in self.connector_sets() {
            for &t in &terms {
                if a == 0 && t == 0 {
                    continue;
                }
                for l in 0..=self.w {
                    out.push((a, t, l));
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &self,
        pool: &[(u32, Mask, Mask, usize)],
        from: usize,
        left: usize,
        weight: usize,
        chosen: &mut Vec<usize>,
        connectors: Mask,
        legend: &Legend,
        out: &mut Terms,
    ) {
        if left == 0 {
            self.finish(pool, chosen, connectors, weight, legend, out);
            return;
        }
        let covered = chosen.iter().fold(0, |acc, &i| acc | pool[i].2);
        let missing = self.k - popcount(covered) as usize;
        if missing > left * self.terminal_cap {
            return;
        }
        for i in from..pool.len() {
            let l = pool[i].3;
            if weight + l > self.w {
                continue;
            }
            chosen.push(i);
            self.choose(
                pool,
                i,
                left - 1,
                weight + l,
                chosen,
                connectors,
                legend,
                out,
            );
            chosen.pop();
        }
    }

    fn finish(
        &self,
        pool: &[(u32, Mask, Mask, usize)],
        chosen: &[usize],
        connectors: Mask,
        weight: usize,
        legend: &Legend,
        out: &mut Terms,
    ) {
        let covered = chosen.iter().fold(0, |acc, &i| acc | pool[i].2);
        if covered != full(self.k) {
            return;
        }
        let sets: SmallVec<[Mask; 8]> = chosen.iter().map(|&i| pool[i].1).collect();
        let graph = subset_graph(&sets);
        let shared = graph.connectors.iter().fold(0, |acc, &c| acc | 1 << c);
        if shared != connectors || !graph.is_connected() {
            return;
        }
        let mut vars: SmallVec<[u32; 8]> = chosen.iter().map(|&i| pool[i].0).collect();
        vars.push(legend.id(&VariableKey::Budget { l: weight }));
        out.add(&vars);
    }
}

impl Generator for SteinerTree {
    fn delta(&self) -> u32 {
        (self.theta + 1) as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        for (a, terms, l) in self.pieces() {
            legend.push(VariableKey::Steiner { terms, a, l });
        }
        for l in 0..=self.w {
            legend.push(VariableKey::Budget { l });
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let pieces = self.pieces();
        let tasks: Vec<(Mask, usize)> = self
            .connector_sets()
            .into_iter()
            .flat_map(|c| {
                let lo = popcount(c) as usize + 1;
                let hi = if c == 0 { 1 } else { self.theta };
                (lo..=hi).map(move |m| (c, m))
            })
            .collect();
        Terms::gather(&tasks, |&(c, m), out| {
            // With several pieces every piece must touch a connector.
            let pool: Vec<(u32, Mask, Mask, usize)> = pieces
                .iter()
                .filter(|&&(a, _, _)| a & !c == 0 && (m == 1 || a != 0))
                .map(|&(a, terms, l)| {
                    (
                        legend.id(&VariableKey::Steiner { terms, a, l }),
                        a,
                        terms,
                        l,
                    )
                })
                .collect();
            self.choose(&pool, 0, m, 0, &mut Vec::new(), c, legend, out);
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let g = graph_for(Problem::KSteinerTree, instance, self.n)?;
        let terminals = &instance.terminals;
        if terminals.len() != self.k {
            return Err(size_mismatch("terminal count", self.k, terminals.len()));
        }
        if let Some(&v) = terminals.iter().find(|&&v| v >= self.n) {
            return Err(Error::param(format!("terminal {v} is not a node")));
        }
        let t = instance
            .budget
            .ok_or_else(|| Error::param("k-steiner needs the weight budget t"))?;
        if t > self.w {
            return Err(Error::param(format!(
                "budget t = {t} exceeds the cap w = {}",
                self.w
            )));
        }
        let mut pairs: Vec<(Mask, Mask)> = legend
            .keys()
            .iter()
            .filter_map(|key| match *key {
                VariableKey::Steiner { terms, a, .. } => Some((terms, a)),
                _ => None,
            })
            .collect();
        pairs.dedup();
        let costs = par::map(&pairs, |&(terms, a)| {
            let nodes = elements(terms).fold(a, |acc, p| acc | 1 << terminals[p]);
            let list: Vec<usize> = elements(nodes).collect();
            steiner_tree_min(g, &list)
        });
        let mut cost = HashMap::with_capacity(pairs.len());
        for (pair, c) in pairs.into_iter().zip(costs) {
            cost.insert(pair, c?);
        }
        legend.assign(|key| match *key {
            VariableKey::Steiner { terms, a, l } => {
                Ok(cost[&(terms, a)].is_some_and(|c| c <= l as u64))
            }
            VariableKey::Budget { l } => Ok(l <= t),
            _ => unreachable!("foreign key {key}"),
        })
    }
}

// k-internal and k-leaf spanning tree.

/// A spanning tree cut into at most `θ` node sets whose incidence with the
/// shared nodes forms a tree. Each piece is scored on `G[S]` with a pendant
/// leaf attached to every shared node.
pub(super) struct SpanningTree {
    problem: Problem,
    n: usize,
    theta: usize,
    k: usize,
    cap: usize,
}

impl SpanningTree {
    pub(super) fn new(problem: Problem, p: &Params) -> Result<Self> {
        let k = p.k.expect("checked");
        check_n(problem, p.n, PARAM_N_CAP)?;
        if p.theta < 3 || p.n < 2 {
            return Err(Error::param(format!(
                "{problem} needs theta ≥ 3 and n ≥ 2, got theta={} n={}",
                p.theta, p.n
            )));
        }
        check_k(problem, k, p.n, "n")?;
        Ok(Self {
            problem,
            n: p.n,
            theta: p.theta,
            k,
            cap: piece_cap(p.n, p.theta),
        })
    }

    fn node_sets(&self) -> Vec<Mask> {
        subsets_sized(full(self.n), 2, self.cap)
    }

    fn threshold(&self, pieces: usize) -> usize {
        match self.problem {
            Problem::KInternalSpanningTree => self.k + pieces - 1,
            _ => self.k,
        }
    }

    fn cover(
        &self,
        sets: &[Mask],
        from: usize,
        chosen: &mut Vec<Mask>,
        visit: &mut dyn FnMut(&[Mask]),
    ) {
        let union = chosen.iter().fold(0, |acc, &s| acc | s);
        if union == full(self.n) {
            visit(chosen);
        }
        if chosen.len() == self.theta {
            return;
        }
        for (i, &s) in sets.iter().enumerate().skip(from) {
            chosen.push(s);
            self.cover(sets, i + 1, chosen, visit);
            chosen.pop();
        }
    }

    fn budgets(&self, legend: &Legend, pieces: &[(Mask, Mask)], out: &mut Terms) {
        let need = self.threshold(pieces.len());
        let mut ks = vec![0usize; pieces.len()];
        fn go(
            idx: usize,
            sum: usize,
            need: usize,
            pieces: &[(Mask, Mask)],
            ks: &mut [usize],
            legend: &Legend,
            out: &mut Terms,
        ) {
            if idx == pieces.len() {
                if sum >= need {
                    let vars: SmallVec<[u32; 8]> = pieces
                        .iter()
                        .zip(ks.iter())
                        .map(|(&(s, a), &k)| legend.id(&VariableKey::SpanTree { s, a, k }))
                        .collect();
                    out.add(&vars);
                }
                return;
            }
            let rest: usize = pieces[idx + 1..]
                .iter()
                .map(|&(s, _)| popcount(s) as usize)
                .sum();
            for k in 0..=popcount(pieces[idx].0) as usize {
                if sum + k + rest < need {
                    continue;
                }
                ks[idx] = k;
                go(idx + 1, sum + k, need, pieces, ks, legend, out);
            }
        }
        go(0, 0, need, pieces, &mut ks, legend, out);
    }

    /// `G[S]` with a pendant leaf on every node of `A`.
    fn piece_graph(g: &Graph, s: Mask, a: Mask) -> Result<Graph> {
        let nodes: Vec<usize> = elements(s).collect();
        let pos = |v: usize| nodes.iter().position(|&x| x == v);
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .filter_map(|&(u, v, _)| Some((pos(u)?, pos(v)?)))
            .collect();
        for (j, v) in elements(a).enumerate() {
            edges.push((pos(v).expect("A ⊆ S"), nodes.len() + j));
        }
        Graph::undirected(nodes.len() + popcount(a) as usize, &edges)
    }
}

impl Generator for SpanningTree {
    fn delta(&self) -> u32 {
        self.theta as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        for s in self.node_sets() {
            for a in subsets_sized(s, 0, self.theta - 1) {
                for k in 0..=popcount(s) as usize {
                    legend.push(VariableKey::SpanTree { s, a, k });
                }
            }
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let sets = self.node_sets();
        let firsts: Vec<usize> = (0..sets.len()).collect();
        Terms::gather(&firsts, |&first, out| {
            let mut chosen = vec![sets[first]];
            self.cover(&sets, first + 1, &mut chosen, &mut |family| {
                if !subset_graph(family).is_tree() {
                    return;
                }
                let mut pieces: SmallVec<[(Mask, Mask); 8]> = SmallVec::new();
                for (i, &s) in family.iter().enumerate() {
                    let others = family
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .fold(0, |acc, (_, &x)| acc | x);
                    let a = s & others;
                    if popcount(a) as usize > self.theta - 1 {
                        return;
                    }
                    pieces.push((s, a));
                }
                self.budgets(legend, &pieces, out);
            });
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let g = graph_for(self.problem, instance, self.n)?;
        let mut pairs: Vec<(Mask, Mask)> = legend
            .keys()
            .iter()
            .filter_map(|key| match *key {
                VariableKey::SpanTree { s, a, .. } => Some((s, a)),
                _ => None,
            })
            .collect();
        pairs.dedup();
        let internal = self.problem == Problem::KInternalSpanningTree;
        let best = par::map(&pairs, |&(s, a)| {
            let h = Self::piece_graph(g, s, a)?;
            if internal {
                spanning_tree_internal_max(&h)
            } else {
                spanning_tree_leaf_max(&h)
            }
        });
        let mut score = HashMap::with_capacity(pairs.len());
        for (pair, b) in pairs.into_iter().zip(best) {
            score.insert(pair, b?);
        }
        legend.assign(|key| match *key {
            VariableKey::SpanTree { s, a, k } => {
                let need = if internal {
                    k
                } else {
                    k + popcount(a) as usize
                };
                Ok(score[&(s, a)].is_some_and(|b| b >= need))
            }
            _ => unreachable!("foreign key {key}"),
        })
    }
}

// k-nonblocker.

/// The complement of a nonblocker dominates it. Nodes get one of `θ`
/// dominator labels `D^i` or one of `θ²` labels `N^i_j`, meaning "dominated
/// by `D^i`", with every class capped at `⌈n/θ⌉`.
pub(super) struct Nonblocker {
    n: usize,
    theta: usize,
    k: usize,
    b: usize,
}

impl Nonblocker {
    pub(super) fn new(p: &Params) -> Result<Self> {
        let k = p.k.expect("checked");
        check_n(Problem::KNonblocker, p.n, PARAM_N_CAP)?;
        check_k(Problem::KNonblocker, k, p.n, "n")?;
        Ok(Self {
            n: p.n,
            theta: p.theta,
            k,
            b: ceil_div(p.n, p.theta),
        })
    }
}

impl Generator for Nonblocker {
    fn delta(&self) -> u32 {
        (self.theta * self.theta) as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        let doms = subsets_sized(full(self.n), 0, self.b);
        for n in subsets_sized(full(self.n), 1, self.b) {
            for &d in &doms {
                legend.push(VariableKey::NonBlocker { n, d });
            }
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let theta = self.theta;
        gather_labelings(
            full(self.n),
            theta + theta * theta,
            self.b,
            false,
            |classes, out| {
                let (doms, dominated) = classes.split_at(theta);
                let size: usize = dominated.iter().map(|&c| popcount(c) as usize).sum();
                if size < self.k {
                    return;
                }
                let mut vars = SmallVec::<[u32; 8]>::new();
                for (idx, &n) in dominated.iter().enumerate() {
                    if n != 0 {
                        let d = doms[idx / theta];
                        vars.push(legend.id(&VariableKey::NonBlocker { n, d }));
                    }
                }
                out.add(&vars);
            },
        )
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let g = graph_for(Problem::KNonblocker, instance, self.n)?;
        legend.assign(|key| match *key {
            VariableKey::NonBlocker { n, d } => Ok(dominated_check(g, n, d)),
            _ => unreachable!("foreign key {key}"),
        })
    }
}

// k-set splitting.

/// `k` family sets split by one 2-coloring, grouped into at most `θ` groups
/// of `⌈k/θ⌉`. Each group names a red part and a blue part that meet every
/// set of the group; the colors of the untouched elements are left free.
pub(super) struct SetSplitting {
    n: usize,
    m: usize,
    theta: usize,
    k: usize,
    b: usize,
}

impl SetSplitting {
    pub(super) fn new(p: &Params) -> Result<Self> {
        let m = p.m.expect("checked");
        let k = p.k.expect("checked");
        check_n(Problem::KSetSplitting, p.n, PARAM_N_CAP)?;
        if m > PARAM_N_CAP {
            return Err(Error::param(format!(
                "k-set-splitting: m = {m} exceeds {PARAM_N_CAP}"
            )));
        }
        check_k(Problem::KSetSplitting, k, m, "m")?;
        Ok(Self {
            n: p.n,
            m,
            theta: p.theta,
            k,
            b: ceil_div(k, p.theta).max(1),
        })
    }

    fn sides(
        &self,
        groups: &[Mask],
        red: Mask,
        blue: Mask,
        vars: &mut SmallVec<[u32; 8]>,
        legend: &Legend,
        out: &mut Terms,
    ) {
        let Some((&l, rest)) = groups.split_first() else {
            out.add(vars);
            return;
        };
        let size = popcount(l) as usize;
        let universe = full(self.n);
        for a in subsets_sized(universe & !blue, 1, size) {
            for b in subsets_sized(universe & !red & !a, 1, size) {
                vars.push(legend.id(&VariableKey::Split { a, b, l }));
                self.sides(rest, red | a, blue | b, vars, legend, out);
                vars.pop();
            }
        }
    }
}

impl Generator for SetSplitting {
    fn delta(&self) -> u32 {
        self.theta as u32
    }

    fn legend(&self) -> Legend {
        let mut legend = Legend::default();
        let universe = full(self.n);
        for l in subsets_sized(full(self.m), 0, self.b) {
            for a in subsets_sized(universe, 0, self.b) {
                for b in subsets_sized(universe & !a, 0, self.b) {
                    if l | a | b != 0 {
                        legend.push(VariableKey::Split { a, b, l });
                    }
                }
            }
        }
        legend
    }

    fn monomials(&self, legend: &Legend) -> Terms {
        let mut groupings = Vec::new();
        labelings(full(self.m), self.theta, self.b, true, &mut |groups| {
            if groups.iter().map(|&g| popcount(g) as usize).sum::<usize>() == self.k {
                groupings.push(
                    groups
                        .iter()
                        .copied()
                        .filter(|&g| g != 0)
                        .collect::<Vec<_>>(),
                );
            }
        });
        Terms::gather(&groupings, |groups, out| {
            self.sides(groups, 0, 0, &mut SmallVec::new(), legend, out);
        })
    }

    fn assign(&self, legend: &Legend, instance: &Instance) -> Result<Vec<bool>> {
        let f = family_for(Problem::KSetSplitting, instance, self.n, self.m)?;
        legend.assign(|key| match *key {
            VariableKey::Split { a, b, l } => {
                Ok(elements(l).all(|i| f.sets.get(i).is_some_and(|&set| split_check(a, b, set))))
            }
            _ => unreachable!("foreign key {key}"),
        })
    }
}
