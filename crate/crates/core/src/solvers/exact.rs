//! Exact exponential-time deciders over bitmask-indexed node sets.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::instance::{CnfFormula, Graph, Hypergraph3, SetFamily};
use crate::bits::{bit, contains, elements, full, popcount, submasks, Mask};
use crate::error::{Error, Result};

/// Largest node count for whole-graph subset DPs (`2^n` tables).
pub const SUBSET_DP_CAP: usize = 24;
/// Largest node set for spanning-tree enumeration.
pub const SPANNING_TREE_CAP: usize = 9;
/// Largest terminal set for the Steiner DP.
pub const STEINER_TERMINAL_CAP: usize = 10;

fn compress(s: Mask) -> Vec<usize> {
    elements(s).collect()
}

/// End nodes `w` such that `G[s]` has a Hamiltonian path from `u` to `w`.
pub fn ham_path_ends(g: &Graph, s: Mask, u: usize) -> Mask {
    if !contains(s, u) {
        return 0;
    }
    let nodes = compress(s);
    let k = nodes.len();
    let local = |v: usize| nodes.iter().position(|&x| x == v);
    let adj: Vec<Mask> = nodes
        .iter()
        .map(|&v| elements(g.out_neighbors(v) & s).fold(0, |m, w| m | bit(local(w).unwrap())))
        .collect();
    let start = local(u).unwrap();
    let mut ends = vec![0 as Mask; 1 << k];
    ends[1 << start] = 1 << start;
    for mask in 0..(1usize << k) {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        for w in elements(e) {
            for x in elements(adj[w] & !(mask as Mask)) {
                ends[mask | 1 << x] |= 1 << x;
            }
        }
    }
    elements(ends[(1 << k) - 1]).fold(0, |m, i| m | bit(nodes[i]))
}

/// Whether `G[s]` has a Hamiltonian path from `u` whose last node has an
/// edge to `next` (no end condition when `next` is `None`).
pub fn ham_segment(g: &Graph, s: Mask, u: usize, next: Option<usize>) -> bool {
    let ends = ham_path_ends(g, s, u);
    match next {
        None => ends != 0,
        Some(v) => elements(ends).any(|w| g.has_edge(w, v)),
    }
}

fn check_subset_dp(n: usize) -> Result<()> {
    if n > SUBSET_DP_CAP {
        return Err(Error::param(format!(
            "subset DP limited to {SUBSET_DP_CAP} nodes"
        )));
    }
    Ok(())
}

/// Held–Karp: whether some path visits every node exactly once.
pub fn hamiltonian_path(g: &Graph) -> Result<bool> {
    let n = g.n();
    check_subset_dp(n)?;
    if n == 0 {
        return Ok(true);
    }
    let mut ends = vec![0 as Mask; 1 << n];
    for v in 0..n {
        ends[1 << v] = bit(v);
    }
    for mask in 1..(1usize << n) {
        let e = ends[mask];
        for w in elements(e) {
            for x in elements(g.out_neighbors(w) & !(mask as Mask)) {
                ends[mask | 1 << x] |= bit(x);
            }
        }
    }
    Ok(ends[(1 << n) - 1] != 0)
}

/// Whether some cycle visits every node exactly once.
pub fn hamiltonian_cycle(g: &Graph) -> Result<bool> {
    let n = g.n();
    check_subset_dp(n)?;
    if n < 2 || (!g.is_directed() && n < 3) {
        return Ok(false);
    }
    let ends = ham_path_ends(g, full(n), 0);
    Ok(elements(ends).any(|w| g.has_edge(w, 0)))
}

pub fn is_independent(g: &Graph, s: Mask) -> bool {
    elements(s).all(|v| (g.out_neighbors(v) | g.in_neighbors(v)) & s == 0)
}

/// Size of a maximum independent set inside `nodes`.
pub fn max_independent_set_in(g: &Graph, nodes: Mask) -> usize {
    if nodes == 0 {
        return 0;
    }
    let v = nodes.trailing_zeros() as usize;
    let nb = (g.out_neighbors(v) | g.in_neighbors(v)) & nodes;
    let without = max_independent_set_in(g, nodes & !bit(v));
    if nb == 0 {
        return without + 1;
    }
    without.max(1 + max_independent_set_in(g, nodes & !nb & !bit(v)))
}

pub fn max_independent_set(g: &Graph) -> usize {
    max_independent_set_in(g, full(g.n()))
}

/// Number of independent sets (including the empty one) inside every
/// submask of `s`, indexed by compressed submask.
fn independent_set_counts(g: &Graph, nodes: &[usize]) -> Vec<u64> {
    let k = nodes.len();
    let nb: Vec<usize> = nodes
        .iter()
        .map(|&v| {
            let m = g.out_neighbors(v) | g.in_neighbors(v);
            nodes
                .iter()
                .enumerate()
                .filter(|(_, &w)| contains(m, w))
                .fold(0usize, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let mut cnt = vec![0u64; 1 << k];
    cnt[0] = 1;
    for x in 1..(1usize << k) {
        let v = x.trailing_zeros() as usize;
        let rest = x & !(1 << v);
        cnt[x] = cnt[rest] + cnt[rest & !nb[v]];
    }
    cnt
}

/// Whether `G[s]` can be properly colored with `r` colors, by
/// inclusion–exclusion over independent-set counts.
pub fn chromatic_at_most(g: &Graph, s: Mask, r: usize) -> Result<bool> {
    let nodes = compress(s);
    let k = nodes.len();
    check_subset_dp(k)?;
    if k == 0 {
        return Ok(true);
    }
    if r == 0 {
        return Ok(false);
    }
    if r >= k {
        return Ok(true);
    }
    let cnt = independent_set_counts(g, &nodes);
    // Counts r-tuples of independent sets whose union is all of s.
    if (k + 1) * r + k < 126 {
        let mut total: i128 = 0;
        for (x, &c) in cnt.iter().enumerate() {
            let term = (c as i128).pow(r as u32);
            if (k - (x.count_ones() as usize)) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(total > 0)
    } else {
        let mut total = BigInt::zero();
        for (x, &c) in cnt.iter().enumerate() {
            let term = num_traits::pow(BigInt::from(c), r);
            if (k - (x.count_ones() as usize)) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(total.is_positive())
    }
}

/// Chromatic number of `G[s]`.
pub fn chromatic_number(g: &Graph, s: Mask) -> Result<usize> {
    for r in 0..=popcount(s) as usize {
        if chromatic_at_most(g, s, r)? {
            return Ok(r);
        }
    }
    unreachable!("|s| colors always suffice")
}

/// Fewest sets of `f` whose union contains `u`, if any cover exists.
pub fn set_cover_min(f: &SetFamily, u: Mask) -> Result<Option<usize>> {
    let nodes = compress(u);
    let k = nodes.len();
    check_subset_dp(k)?;
    let local: Vec<usize> = f
        .sets
        .iter()
        .map(|&s| {
            nodes
                .iter()
                .enumerate()
                .filter(|(_, &e)| contains(s, e))
                .fold(0usize, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    const INF: usize = usize::MAX;
    let mut best = vec![INF; 1 << k];
    best[0] = 0;
    for x in 1..(1usize << k) {
        let low = x & x.wrapping_neg();
        for &s in local.iter().filter(|&&s| s & low != 0) {
            let prev = best[x & !s];
            if prev != INF {
                best[x] = best[x].min(prev + 1);
            }
        }
    }
    let b = best[(1 << k) - 1];
    Ok((b != INF).then_some(b))
}

pub fn set_cover_at_most(f: &SetFamily, u: Mask, r: usize) -> Result<bool> {
    Ok(set_cover_min(f, u)?.is_some_and(|b| b <= r))
}

/// Maximum number of pairwise disjoint triples inside `a × b × c`.
pub fn matching3d_max(h: &Hypergraph3, a: Mask, b: Mask, c: Mask) -> usize {
    fn go(
        h: &Hypergraph3,
        key: (Mask, Mask, Mask),
        memo: &mut HashMap<(Mask, Mask, Mask), usize>,
    ) -> usize {
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let (a, b, c) = key;
        let best = h
            .triples
            .iter()
            .filter(|&&(x, y, z)| contains(a, x) && contains(b, y) && contains(c, z))
            .map(|&(x, y, z)| 1 + go(h, (a & !bit(x), b & !bit(y), c & !bit(z)), memo))
            .max()
            .unwrap_or(0);
        memo.insert(key, best);
        best
    }
    go(h, (a, b, c), &mut HashMap::new())
}

/// Number of the listed clauses satisfied by `values` (bit `i` holds
/// variable `i+1`).
pub fn sat_count_restricted(f: &CnfFormula, clauses: &[usize], values: Mask) -> usize {
    clauses
        .iter()
        .filter(|&&c| f.clause_satisfied(c, values))
        .count()
}

/// End nodes `v` reachable from `u` by a path whose node colors are
/// pairwise distinct and together form exactly `colors`.
pub fn colorful_reach(g: &Graph, coloring: &[u32], colors: Mask, u: usize) -> Mask {
    let cu = coloring[u] as usize;
    if !contains(colors, cu) {
        return 0;
    }
    let mut dp: HashMap<Mask, Mask> = HashMap::new();
    dp.insert(bit(cu), bit(u));
    for used in submasks(colors) {
        let Some(&ends) = dp.get(&used) else { continue };
        for w in elements(ends) {
            for x in elements(g.out_neighbors(w)) {
                let c = coloring[x] as usize;
                if contains(colors, c) && !contains(used, c) {
                    *dp.entry(used | bit(c)).or_insert(0) |= bit(x);
                }
            }
        }
    }
    dp.get(&colors).copied().unwrap_or(0)
}

pub fn colorful_path_exact(g: &Graph, coloring: &[u32], colors: Mask, u: usize, v: usize) -> bool {
    contains(colorful_reach(g, coloring, colors, u), v)
}

/// All-pairs shortest path weights; `u64::MAX` marks unreachable pairs.
pub fn shortest_paths(g: &Graph) -> Vec<Vec<u64>> {
    let n = g.n();
    let mut d = vec![vec![u64::MAX; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(u, v, w) in g.edges() {
        d[u][v] = d[u][v].min(w);
        if !g.is_directed() {
            d[v][u] = d[v][u].min(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == u64::MAX {
                continue;
            }
            for j in 0..n {
                let via = d[i][k].saturating_add(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Minimum weight of a tree connecting all `terminals` (Dreyfus–Wagner);
/// `None` when they are not all in one component.
#[allow(clippy::needless_range_loop)]
pub fn steiner_tree_min(g: &Graph, terminals: &[usize]) -> Result<Option<u64>> {
    let t = terminals.len();
    if t > STEINER_TERMINAL_CAP {
        return Err(Error::param(format!(
            "at most {STEINER_TERMINAL_CAP} terminals"
        )));
    }
    if t <= 1 {
        return Ok(Some(0));
    }
    let n = g.n();
    let d = shortest_paths(g);
    const INF: u64 = u64::MAX;
    let mut dp = vec![vec![INF; n]; 1 << t];
    for (i, &ti) in terminals.iter().enumerate() {
        dp[1 << i][..n].copy_from_slice(&d[ti][..n]);
    }
    for s in 1..(1usize << t) {
        if s.count_ones() < 2 {
            continue;
        }
        for v in 0..n {
            let mut sub = (s - 1) & s;
            while sub > 0 {
                let (a, b) = (dp[sub][v], dp[s & !sub][v]);
                if a != INF && b != INF {
                    dp[s][v] = dp[s][v].min(a + b);
                }
                sub = (sub - 1) & s;
            }
        }
        for v in 0..n {
            let best = (0..n)
                .filter(|&u| dp[s][u] != INF && d[u][v] != INF)
                .map(|u| dp[s][u] + d[u][v])
                .min()
                .unwrap_or(INF);
            dp[s][v] = dp[s][v].min(best);
        }
    }
    let best = dp[(1 << t) - 1].iter().copied().min().unwrap_or(INF);
    Ok((best != INF).then_some(best))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Calls `visit` with the degree vector (indexed by node) of every spanning
/// tree of `G[nodes]`, by recursive edge inclusion/exclusion.
pub fn for_each_spanning_tree(g: &Graph, nodes: Mask, visit: &mut dyn FnMut(&[u32])) -> Result<()> {
    let k = popcount(nodes) as usize;
    if k > SPANNING_TREE_CAP {
        return Err(Error::param(format!(
            "spanning-tree enumeration limited to {SPANNING_TREE_CAP} nodes"
        )));
    }
    if k == 0 {
        return Ok(());
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|&&(u, v, _)| contains(nodes, u) && contains(nodes, v))
        .map(|&(u, v, _)| (u, v))
        .collect();
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut deg = vec![0u32; n];

    fn can_finish(edges: &[(usize, usize)], parent: &[usize], need: usize) -> bool {
        let mut p = parent.to_vec();
        let mut joined = 0;
        for &(u, v) in edges {
            let (a, b) = (find(&mut p, u), find(&mut p, v));
            if a != b {
                p[a] = b;
                joined += 1;
            }
        }
        joined >= need
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        edges: &[(usize, usize)],
        idx: usize,
        need: usize,
        parent: &mut Vec<usize>,
        deg: &mut [u32],
        visit: &mut dyn FnMut(&[u32]),
    ) {
        if need == 0 {
            visit(deg);
            return;
        }
        if idx == edges.len() || !can_finish(&edges[idx..], parent, need) {
            return;
        }
        let (u, v) = edges[idx];
        let (a, b) = (find(parent, u), find(parent, v));
        if a != b {
            let saved = parent.clone();
            parent[a] = b;
            deg[u] += 1;
            deg[v] += 1;
            go(edges, idx + 1, need - 1, parent, deg, visit);
            deg[u] -= 1;
            deg[v] -= 1;
            *parent = saved;
        }
        go(edges, idx + 1, need, parent, deg, visit);
    }

    go(&edges, 0, k - 1, &mut parent, &mut deg, visit);
    Ok(())
}

/// Best `score` over spanning trees of `G[nodes]`; `None` when disconnected.
pub fn spanning_tree_best(
    g: &Graph,
    nodes: Mask,
    score: impl Fn(&[u32]) -> usize,
) -> Result<Option<usize>> {
    let mut best: Option<usize> = None;
    for_each_spanning_tree(g, nodes, &mut |deg| {
        let s = score(deg);
        best = Some(best.map_or(s, |b| b.max(s)));
    })?;
    Ok(best)
}

/// Most internal nodes (degree ≥ 2) over all spanning trees.
pub fn spanning_tree_internal_max(g: &Graph) -> Result<Option<usize>> {
    let nodes = full(g.n());
    spanning_tree_best(g, nodes, |deg| {
        elements(nodes).filter(|&v| deg[v] >= 2).count()
    })
}

/// Most leaves (degree ≤ 1) over all spanning trees.
pub fn spanning_tree_leaf_max(g: &Graph) -> Result<Option<usize>> {
    let nodes = full(g.n());
    spanning_tree_best(g, nodes, |deg| {
        elements(nodes).filter(|&v| deg[v] <= 1).count()
    })
}

/// Every node of `dominated` has a neighbor in `dominators`.
pub fn dominated_check(g: &Graph, dominated: Mask, dominators: Mask) -> bool {
    elements(dominated).all(|v| g.out_neighbors(v) & dominators != 0)
}

/// `set` meets both sides.
pub fn split_check(a: Mask, b: Mask, set: Mask) -> bool {
    set & a != 0 && set & b != 0
}
