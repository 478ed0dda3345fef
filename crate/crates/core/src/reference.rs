//! Naive oracles and random generators for cross-checking.
//!
//! Nothing here shares code with `solvers`, `circuits::expand` or
//! `splitters::verify_splitter`: every answer is recomputed by the most
//! direct enumeration available, so an agreement is real evidence.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{PrimeModulus, SparsePolynomial};
use crate::circuits::{ArithmeticCircuit, Gate};
use crate::solvers::{CnfFormula, Graph, Hypergraph3, SetFamily, Tree};
use crate::splitters::{SplitKind, SplitterFamily};

fn adjacent(g: &Graph, u: usize, v: usize) -> bool {
    g.has_edge(u, v) || g.has_edge(v, u)
}

fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Undirected edges as `(min, max, weight)`, each listed once.
fn plain_edges(g: &Graph) -> Vec<(usize, usize, u64)> {
    let mut out: Vec<(usize, usize, u64)> = g
        .edges()
        .iter()
        .map(|&(u, v, w)| (u.min(v), u.max(v), w))
        .collect();
    out.sort_unstable();
    out.dedup_by_key(|e| (e.0, e.1));
    out
}

// Graph problems.

/// Directed (or undirected) Hamiltonian path by trying every ordering.
pub fn ham_path(g: &Graph) -> bool {
    fn go(g: &Graph, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if path.len() == g.n() {
            return true;
        }
        for v in 0..g.n() {
            if used[v] || path.last().is_some_and(|&u| !g.has_edge(u, v)) {
                continue;
            }
            used[v] = true;
            path.push(v);
            if go(g, path, used) {
                return true;
            }
            path.pop();
            used[v] = false;
        }
        false
    }
    g.n() == 0 || go(g, &mut Vec::new(), &mut vec![false; g.n()])
}

/// Whether some simple path has exactly `k` nodes.
pub fn k_path(g: &Graph, k: usize) -> bool {
    fn go(g: &Graph, at: usize, left: usize, used: &mut [bool]) -> bool {
        if left == 0 {
            return true;
        }
        for v in 0..g.n() {
            if !used[v] && g.has_edge(at, v) {
                used[v] = true;
                if go(g, v, left - 1, used) {
                    return true;
                }
                used[v] = false;
            }
        }
        false
    }
    if k == 0 {
        return true;
    }
    (0..g.n()).any(|s| {
        let mut used = vec![false; g.n()];
        used[s] = true;
        go(g, s, k - 1, &mut used)
    })
}

fn independent(g: &Graph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &u)| set[i + 1..].iter().all(|&v| !adjacent(g, u, v)))
}

pub fn max_independent_set(g: &Graph) -> usize {
    (0u64..1 << g.n())
        .filter(|&m| independent(g, &members(m, g.n())))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn max_clique(g: &Graph) -> usize {
    (0u64..1 << g.n())
        .filter(|&m| {
            let s = members(m, g.n());
            s.iter()
                .enumerate()
                .all(|(i, &u)| s[i + 1..].iter().all(|&v| adjacent(g, u, v)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn min_vertex_cover(g: &Graph) -> usize {
    (0u64..1 << g.n())
        .filter(|&m| {
            g.edges()
                .iter()
                .all(|&(u, v, _)| m >> u & 1 == 1 || m >> v & 1 == 1)
        })
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Smallest `r` admitting a proper `r`-coloring, found by trying all `r^n`
/// colorings for increasing `r`.
pub fn chromatic_number(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    for r in 1..=n {
        let total = r.pow(n as u32);
        for code in 0..total {
            let mut c = vec![0; n];
            let mut x = code;
            for slot in c.iter_mut() {
                *slot = x % r;
                x /= r;
            }
            if g.edges().iter().all(|&(u, v, _)| c[u] != c[v]) {
                return r;
            }
        }
    }
    n
}

/// Largest `N` whose every node has a neighbor outside `N`.
pub fn max_nonblocker(g: &Graph) -> usize {
    let n = g.n();
    (0u64..1 << n)
        .filter(|&set| {
            members(set, n)
                .iter()
                .all(|&v| (0..n).any(|u| set >> u & 1 == 0 && adjacent(g, u, v)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    r
}

/// Visits the node degrees of every spanning tree, found by testing every
/// `(n-1)`-subset of edges for acyclicity.
fn spanning_degrees(g: &Graph, visit: &mut dyn FnMut(&[usize])) {
    let n = g.n();
    let edges = plain_edges(g);
    if n == 0 || edges.len() < n - 1 {
        return;
    }
    for pick in 0u64..1 << edges.len() {
        if pick.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        let mut deg = vec![0; n];
        let mut acyclic = true;
        for i in members(pick, edges.len()) {
            let (u, v, _) = edges[i];
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                acyclic = false;
                break;
            }
            parent[a] = b;
            deg[u] += 1;
            deg[v] += 1;
        }
        if acyclic {
            visit(&deg);
        }
    }
}

/// Most nodes of degree ≥ 2 in a spanning tree; `None` if disconnected.
pub fn max_internal_spanning_tree(g: &Graph) -> Option<usize> {
    if g.n() == 1 {
        return Some(0);
    }
    let mut best = None;
    spanning_degrees(g, &mut |deg| {
        let c = deg.iter().filter(|&&d| d >= 2).count();
        best = Some(best.map_or(c, |b: usize| b.max(c)));
    });
    best
}

/// Most leaves in a spanning tree; `None` if disconnected.
pub fn max_leaf_spanning_tree(g: &Graph) -> Option<usize> {
    if g.n() == 1 {
        return Some(1);
    }
    let mut best = None;
    spanning_degrees(g, &mut |deg| {
        let c = deg.iter().filter(|&&d| d == 1).count();
        best = Some(best.map_or(c, |b: usize| b.max(c)));
    });
    best
}

/// Minimum weight of a tree containing `terminals`: the best minimum
/// spanning tree over every connected node set that contains them.
pub fn steiner_min(g: &Graph, terminals: &[usize]) -> Option<u64> {
    let n = g.n();
    let need = terminals.iter().fold(0u64, |m, &t| m | 1 << t);
    if need.count_ones() <= 1 {
        return Some(0);
    }
    let edges = plain_edges(g);
    let mut best: Option<u64> = None;
    for set in 0u64..1 << n {
        if set & need != need {
            continue;
        }
        let mut inside: Vec<_> = edges
            .iter()
            .filter(|&&(u, v, _)| set >> u & 1 == 1 && set >> v & 1 == 1)
            .copied()
            .collect();
        inside.sort_by_key(|e| e.2);
        let mut parent: Vec<usize> = (0..n).collect();
        let (mut weight, mut joined) = (0u64, 0);
        for (u, v, w) in inside {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                weight += w;
                joined += 1;
            }
        }
        if joined + 1 == set.count_ones() as usize {
            best = Some(best.map_or(weight, |b| b.min(weight)));
        }
    }
    best
}

// Formulas, families, hypergraphs.

fn literal_true(l: i32, assignment: u64) -> bool {
    let v = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
    if l > 0 {
        v
    } else {
        !v
    }
}

/// Most clauses satisfied by one assignment.
pub fn max_sat(f: &CnfFormula) -> usize {
    (0u64..1 << f.nvars)
        .map(|a| {
            f.clauses
                .iter()
                .filter(|c| c.iter().any(|&l| literal_true(l, a)))
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Fewest family sets whose union is the universe.
pub fn min_set_cover(f: &SetFamily) -> Option<usize> {
    let universe = if f.n == 64 {
        u64::MAX
    } else {
        (1u64 << f.n) - 1
    };
    (0u64..1 << f.sets.len())
        .filter(|&pick| {
            members(pick, f.sets.len())
                .iter()
                .fold(0, |acc, &i| acc | f.sets[i])
                == universe
        })
        .map(|pick| pick.count_ones() as usize)
        .min()
}

/// Most family sets split (met by both colors) by one 2-coloring.
pub fn max_set_splitting(f: &SetFamily) -> usize {
    (0u64..1 << f.n)
        .map(|red| {
            f.sets
                .iter()
                .filter(|&&s| s & red != 0 && s & !red != 0)
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Largest set of pairwise disjoint triples.
pub fn max_3d_matching(h: &Hypergraph3) -> usize {
    fn go(h: &Hypergraph3, from: usize, used: [u64; 3]) -> usize {
        let mut best = 0;
        for i in from..h.triples.len() {
            let (a, b, c) = h.triples[i];
            if used[0] >> a & 1 == 0 && used[1] >> b & 1 == 0 && used[2] >> c & 1 == 0 {
                let next = [used[0] | 1 << a, used[1] | 1 << b, used[2] | 1 << c];
                best = best.max(1 + go(h, i + 1, next));
            }
        }
        best
    }
    go(h, 0, [0; 3])
}

// Random instances.

/// Graph on `n` nodes whose edge set is read from the bits of `code`, in
/// the order `(0,1), (0,2), …` (undirected) or all ordered pairs `u ≠ v`
/// (directed).
pub fn graph_from_code(n: usize, directed: bool, code: u64) -> Graph {
    let pairs: Vec<(usize, usize)> = if directed {
        (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect()
    } else {
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect()
    };
    let chosen: Vec<_> = pairs
        .iter()
        .enumerate()
        .filter(|&(i, _)| code >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    if directed {
        Graph::directed(n, &chosen).expect("valid edges")
    } else {
        Graph::undirected(n, &chosen).expect("valid edges")
    }
}

/// Number of possible edges of a (directed) graph on `n` nodes.
pub fn edge_slots(n: usize, directed: bool) -> usize {
    if directed {
        n * n.saturating_sub(1)
    } else {
        n * n.saturating_sub(1) / 2
    }
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, directed: bool) -> Graph {
    let mut code = 0u64;
    for i in 0..edge_slots(n, directed) {
        if rng.gen_bool(p) {
            code |= 1 << i;
        }
    }
    graph_from_code(n, directed, code)
}

/// Undirected graph with weights drawn from `1..=max_weight`.
pub fn random_weighted_graph<R: Rng>(rng: &mut R, n: usize, p: f64, max_weight: u64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(1..=max_weight)));
            }
        }
    }
    Graph::weighted(n, &edges).expect("valid edges")
}

/// `m` clauses of exactly `width` distinct variables with random signs.
pub fn random_cnf<R: Rng>(rng: &mut R, nvars: usize, m: usize, width: usize) -> CnfFormula {
    let vars: Vec<i32> = (1..=nvars as i32).collect();
    let clauses = (0..m)
        .map(|_| {
            vars.choose_multiple(rng, width)
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula::new(nvars, clauses).expect("valid literals")
}

/// `m` sets, each element included with probability `p`.
pub fn random_family<R: Rng>(rng: &mut R, n: usize, m: usize, p: f64) -> SetFamily {
    let sets = (0..m)
        .map(|_| {
            (0..n)
                .filter(|_| rng.gen_bool(p))
                .fold(0u64, |s, e| s | 1 << e)
        })
        .collect();
    SetFamily::new(n, sets).expect("in range")
}

/// `count` distinct random triples over parts of size `n`.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n: usize, count: usize) -> Hypergraph3 {
    let mut all: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
        .collect();
    all.shuffle(rng);
    all.truncate(count.min(all.len()));
    Hypergraph3::new(n, all).expect("in range")
}

/// Uniformly shuffled labels on a random recursive tree.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Tree {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let edges: Vec<(usize, usize)> = (1..n)
        .map(|i| (labels[rng.gen_range(0..i)], labels[i]))
        .collect();
    Tree::from_edges(n, &edges).expect("a tree")
}

// Circuits.

/// Dense-exponent polynomial over ℤ.
pub type NaivePoly = BTreeMap<Vec<u32>, BigInt>;

fn naive_add(a: &NaivePoly, b: &NaivePoly) -> NaivePoly {
    let mut out = a.clone();
    for (m, c) in b {
        *out.entry(m.clone()).or_insert_with(BigInt::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn naive_mul(a: &NaivePoly, b: &NaivePoly) -> NaivePoly {
    let mut out = NaivePoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Untruncated expansion of the first output over ℤ, gate by gate.
pub fn naive_expand(c: &ArithmeticCircuit) -> NaivePoly {
    let nv = c.nvars();
    let mut val: Vec<NaivePoly> = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        let p = match g {
            Gate::Input(v) => {
                let mut e = vec![0; nv];
                e[*v as usize] = 1;
                NaivePoly::from([(e, BigInt::one())])
            }
            Gate::Const(k) if k.is_zero() => NaivePoly::new(),
            Gate::Const(k) => NaivePoly::from([(vec![0; nv], k.clone())]),
            Gate::Add(a, b) => naive_add(&val[*a], &val[*b]),
            Gate::Mul(a, b) => naive_mul(&val[*a], &val[*b]),
        };
        val.push(p);
    }
    val.swap_remove(c.outputs()[0])
}

/// Terms of total degree at most `delta`, reduced into `[0, p)`.
pub fn naive_truncate_mod(f: &NaivePoly, delta: u32, p: PrimeModulus) -> NaivePoly {
    let modulus = BigInt::from(p.value());
    f.iter()
        .filter(|(m, _)| m.iter().sum::<u32>() <= delta)
        .map(|(m, c)| (m.clone(), ((c % &modulus) + &modulus) % &modulus))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// The same polynomial in dense-exponent form.
pub fn to_naive(f: &SparsePolynomial) -> NaivePoly {
    f.terms()
        .iter()
        .map(|(m, c)| {
            let mut e = vec![0; f.nvars()];
            for &(v, d) in m.terms() {
                e[v as usize] = d;
            }
            (e, c.clone())
        })
        .collect()
}

/// Random single-output circuit over ℤ with `gates` internal gates, whose
/// formal degree stays at most `max_degree`. Constants lie in `-3..=3`.
pub fn random_circuit<R: Rng>(
    rng: &mut R,
    nvars: usize,
    gates: usize,
    max_degree: u64,
) -> ArithmeticCircuit {
    let mut list: Vec<Gate> = (0..nvars as u32).map(Gate::Input).collect();
    let mut degree: Vec<u64> = vec![1; nvars];
    for _ in 0..2 {
        list.push(Gate::Const(BigInt::from(rng.gen_range(-3..=3))));
        degree.push(0);
    }
    for _ in 0..gates {
        let a = rng.gen_range(0..list.len());
        let b = rng.gen_range(0..list.len());
        let mul = rng.gen_bool(0.5) && degree[a] + degree[b] <= max_degree;
        if mul {
            list.push(Gate::Mul(a, b));
            degree.push(degree[a] + degree[b]);
        } else {
            list.push(Gate::Add(a, b));
            degree.push(degree[a].max(degree[b]));
        }
    }
    let out = list.len() - 1;
    ArithmeticCircuit::new(nvars, None, list, vec![out]).expect("topological")
}

/// Copy of `c` with one gate changed: an operation swap, a rewired operand,
/// a new constant or a different input variable.
pub fn mutate<R: Rng>(rng: &mut R, c: &ArithmeticCircuit) -> ArithmeticCircuit {
    let mut gates = c.gates().to_vec();
    let id = rng.gen_range(0..gates.len());
    gates[id] = match gates[id].clone() {
        Gate::Input(v) if c.nvars() > 1 => {
            let mut w = rng.gen_range(0..c.nvars() as u32 - 1);
            if w >= v {
                w += 1;
            }
            Gate::Input(w)
        }
        Gate::Input(_) => Gate::Const(BigInt::from(rng.gen_range(0..=3))),
        Gate::Const(k) => {
            let mut d = rng.gen_range(-3..=2);
            if d >= 0 {
                d += 1;
            }
            Gate::Const(k + d)
        }
        Gate::Add(a, b) | Gate::Mul(a, b) if id > 1 && rng.gen_bool(0.5) => {
            let is_add = matches!(gates[id], Gate::Add(..));
            let left = rng.gen_bool(0.5);
            let old = if left { a } else { b };
            let mut other = rng.gen_range(0..id - 1);
            if other >= old {
                other += 1;
            }
            let (a, b) = if left { (other, b) } else { (a, other) };
            if is_add {
                Gate::Add(a, b)
            } else {
                Gate::Mul(a, b)
            }
        }
        Gate::Add(a, b) => Gate::Mul(a, b),
        Gate::Mul(a, b) => Gate::Add(a, b),
    };
    ArithmeticCircuit::new(c.nvars(), c.modulus(), gates, c.outputs().to_vec())
        .expect("operands still precede their gate")
}

// Splitters.

/// Whether every `k`-subset of `0..n` is handled by some member, checked
/// over bitmasks with Gosper's hack.
pub fn splitter_covers(h: &SplitterFamily, mode: SplitKind) -> bool {
    let (n, k, range) = (h.n(), h.k(), h.range());
    if k > n {
        return true;
    }
    if k == 0 {
        return !h.is_empty();
    }
    let handles = |set: u64, m: &[u32]| {
        let mut counts = vec![0usize; range];
        for x in members(set, n) {
            counts[m[x] as usize] += 1;
        }
        match mode {
            SplitKind::Injective => counts.iter().all(|&c| c <= 1),
            SplitKind::Even => {
                let (lo, hi) = (k / range, k.div_ceil(range));
                counts.iter().all(|&c| (lo..=hi).contains(&c))
            }
        }
    };
    let limit = 1u64 << n;
    let mut set = (1u64 << k) - 1;
    while set < limit {
        if !h.members().iter().any(|m| handles(set, m)) {
            return false;
        }
        let low = set & set.wrapping_neg();
        let ripple = set + low;
        set = (((ripple ^ set) >> 2) / low) | ripple;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_oracles() {
        let path = Graph::undirected(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(ham_path(&path));
        assert!(k_path(&path, 4));
        assert!(!k_path(&path, 5));
        assert_eq!(max_independent_set(&path), 2);
        assert_eq!(max_clique(&path), 2);
        assert_eq!(min_vertex_cover(&path), 2);
        assert_eq!(chromatic_number(&path), 2);
        assert_eq!(max_internal_spanning_tree(&path), Some(2));
        assert_eq!(max_leaf_spanning_tree(&path), Some(2));
        assert_eq!(max_nonblocker(&path), 2);
        let star = Graph::undirected(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!ham_path(&star));
        assert_eq!(max_leaf_spanning_tree(&star), Some(3));
        assert_eq!(max_nonblocker(&star), 3);
        let k4 = graph_from_code(4, false, 0b111111);
        assert_eq!(chromatic_number(&k4), 4);
        let two = Graph::undirected(2, &[]).unwrap();
        assert_eq!(max_internal_spanning_tree(&two), None);
    }

    #[test]
    fn steiner_prefers_cheap_detours() {
        let g = Graph::weighted(4, &[(0, 1, 10), (0, 2, 1), (2, 1, 1), (1, 3, 1)]).unwrap();
        assert_eq!(steiner_min(&g, &[0, 1]), Some(2));
        assert_eq!(steiner_min(&g, &[0, 3]), Some(3));
        assert_eq!(steiner_min(&g, &[3]), Some(0));
        let apart = Graph::weighted(3, &[(0, 1, 1)]).unwrap();
        assert_eq!(steiner_min(&apart, &[0, 2]), None);
    }

    #[test]
    fn formula_and_family_oracles() {
        let f = CnfFormula::new(2, vec![vec![1], vec![-1], vec![1, 2]]).unwrap();
        assert_eq!(max_sat(&f), 2);
        let fam = SetFamily::new(3, vec![0b011, 0b110, 0b100]).unwrap();
        assert_eq!(min_set_cover(&fam), Some(2));
        assert_eq!(max_set_splitting(&fam), 2);
        let h = Hypergraph3::new(2, vec![(0, 0, 0), (0, 1, 1), (1, 1, 1)]).unwrap();
        assert_eq!(max_3d_matching(&h), 2);
    }

    #[test]
    fn naive_expansion_and_mutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let c = random_circuit(&mut rng, 3, 12, 6);
            let f = naive_expand(&c);
            assert!(f.keys().all(|m| m.iter().sum::<u32>() <= 6));
            let m = mutate(&mut rng, &c);
            assert_eq!(m.gates().len(), c.gates().len());
            assert_eq!(
                c.gates()
                    .iter()
                    .zip(m.gates())
                    .filter(|(a, b)| a != b)
                    .count(),
                1
            );
        }
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..12 {
            assert_eq!(random_tree(&mut rng, n).edges().len(), n - 1);
        }
    }
}
