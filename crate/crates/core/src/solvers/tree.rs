//! Splitting a tree into few edge-disjoint subtrees with bounded marked
//! counts, and subset graphs that certify how such pieces glue together.

use crate::bits::{bit, contains, elements, full, popcount, Mask};
use crate::error::{Error, Result};

/// Undirected tree on `0..n` (`n ≤ 64`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    adj: Vec<Mask>,
}

impl Tree {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::param("trees need 1..=64 nodes"));
        }
        if edges.len() != n - 1 {
            return Err(Error::param(format!(
                "a tree on {n} nodes has {} edges",
                n - 1
            )));
        }
        let mut adj = vec![0; n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::param(format!("bad tree edge ({u},{v})")));
            }
            adj[u] |= bit(v);
            adj[v] |= bit(u);
        }
        let t = Self { adj };
        if t.component(0, full(n)) != full(n) {
            return Err(Error::param("edges do not form a tree"));
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> Mask {
        self.adj[v]
    }

    /// Nodes reachable from `v` inside `alive`.
    pub fn component(&self, v: usize, alive: Mask) -> Mask {
        let mut seen = bit(v) & alive;
        let mut frontier = seen;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let next = self.adj[x] & alive & !seen;
            seen |= next;
            frontier |= next;
        }
        seen
    }

    /// Edges `(u, v)` with `u < v` and both ends in `nodes`, sorted.
    pub fn edges_within(&self, nodes: Mask) -> Vec<(usize, usize)> {
        elements(nodes)
            .flat_map(|u| {
                elements(self.adj[u] & nodes)
                    .filter(move |&v| u < v)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edges_within(full(self.n()))
    }
}

/// Subtree masks of every alive node when the alive part is rooted at `root`.
fn subtrees(t: &Tree, alive: Mask, root: usize) -> (Vec<Mask>, Vec<Option<usize>>) {
    let n = t.n();
    let mut parent = vec![None; n];
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for c in elements(t.neighbors(v) & alive) {
            if Some(c) != parent[v] {
                parent[c] = Some(v);
                order.push(c);
            }
        }
        i += 1;
    }
    let mut sub = vec![0 as Mask; n];
    for &v in order.iter().rev() {
        sub[v] |= bit(v);
        if let Some(p) = parent[v] {
            sub[p] |= sub[v];
        }
    }
    (sub, parent)
}

/// Finds a subtree `U` with top node `u` inside the alive part of `t`
/// (rooted at `root`) such that deleting `U ∖ {u}` keeps the rest connected
/// and `ℓ/2 ≤ |marked ∩ (U ∖ {u})| ≤ ℓ`.
///
/// Descends into a child holding more than `ℓ` marked nodes; otherwise takes
/// the heaviest child if it holds at least `ℓ/2`, and else the shortest
/// prefix of children (lightest first) whose marked total reaches `ℓ/2`.
pub fn tree_find_subtree(
    t: &Tree,
    alive: Mask,
    root: usize,
    marked: Mask,
    l: usize,
) -> Result<(Mask, usize)> {
    if !contains(alive, root) || t.component(root, alive) != alive {
        return Err(Error::param(
            "alive nodes must form a subtree containing the root",
        ));
    }
    if popcount(marked & alive) as usize <= l {
        return Err(Error::param(format!(
            "need more than {l} marked nodes, found {}",
            popcount(marked & alive)
        )));
    }
    let (sub, parent) = subtrees(t, alive, root);
    let weight = |v: usize| popcount(sub[v] & marked) as usize;
    let mut r = root;
    loop {
        let mut kids: Vec<(usize, usize)> = elements(t.neighbors(r) & alive)
            .filter(|&c| parent[c] == Some(r))
            .map(|c| (weight(c), c))
            .collect();
        if kids.is_empty() {
            return Ok((bit(r), r));
        }
        kids.sort_unstable();
        let &(heaviest, top) = kids.last().expect("nonempty");
        if heaviest > l {
            r = top;
            continue;
        }
        if 2 * heaviest >= l {
            return Ok((sub[top] | bit(r), r));
        }
        let mut total = 0;
        let mut u = bit(r);
        for &(a, c) in &kids {
            total += a;
            u |= sub[c];
            if 2 * total >= l {
                return Ok((u, r));
            }
        }
        return Err(Error::Invariant(
            "children of an over-full subtree hold fewer than ℓ/2 marked nodes".into(),
        ));
    }
}

/// Partitions the edges of `t` into at most `θ` blocks, each inducing a
/// subtree with at most `2k/(θ-1) + 2` marked nodes, where `k = |marked|`.
///
/// Blocks are peeled with [`tree_find_subtree`] (root `0`,
/// `ℓ = ⌈2k/(θ-1)⌉`) while more than `ℓ` marked nodes remain; the remainder
/// forms the last block unless it has no edges.
pub fn tree_edge_partition(
    t: &Tree,
    marked: Mask,
    theta: usize,
) -> Result<Vec<Vec<(usize, usize)>>> {
    if theta < 2 {
        return Err(Error::param("θ must be at least 2"));
    }
    let k = popcount(marked & full(t.n())) as usize;
    let l = (2 * k).div_ceil(theta - 1);
    let mut alive = full(t.n());
    let mut blocks = Vec::new();
    while popcount(marked & alive) as usize > l {
        let (u_nodes, top) = tree_find_subtree(t, alive, 0, marked, l)?;
        blocks.push(t.edges_within(u_nodes));
        alive &= !(u_nodes & !bit(top));
    }
    let rest = t.edges_within(alive);
    if !rest.is_empty() || blocks.is_empty() {
        blocks.push(rest);
    }
    Ok(blocks)
}

/// Node set touched by a block of edges (a lone node when the block is empty).
pub fn block_nodes(block: &[(usize, usize)], fallback: usize) -> Mask {
    if block.is_empty() {
        return bit(fallback);
    }
    block.iter().fold(0, |m, &(u, v)| m | bit(u) | bit(v))
}

/// Bipartite graph joining set node `i` to every element of `X_i` that lies
/// in at least one other set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetGraph {
    pub set_count: usize,
    /// Connector elements in increasing order.
    pub connectors: Vec<usize>,
    /// `(set index, connector position)` pairs.
    pub edges: Vec<(usize, usize)>,
}

pub fn subset_graph(sets: &[Mask]) -> SubsetGraph {
    let mut shared: Mask = 0;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            shared |= sets[i] & sets[j];
        }
    }
    let connectors: Vec<usize> = elements(shared).collect();
    let edges = sets
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| {
            connectors
                .iter()
                .enumerate()
                .filter(move |(_, &c)| contains(x, c))
                .map(move |(j, _)| (i, j))
        })
        .collect();
    SubsetGraph {
        set_count: sets.len(),
        connectors,
        edges,
    }
}

impl SubsetGraph {
    pub fn node_count(&self) -> usize {
        self.set_count + self.connectors.len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &(s, c) in &self.edges {
            adj[s].push(self.set_count + c);
            adj[self.set_count + c].push(s);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    pub fn is_tree(&self) -> bool {
        self.node_count() > 0 && self.edges.len() + 1 == self.node_count() && self.is_connected()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Tree {
        let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Tree::from_edges(leaves + 1, &e).unwrap()
    }

    fn path(n: usize) -> Tree {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Tree::from_edges(n, &e).unwrap()
    }

    #[test]
    fn star_takes_a_prefix_of_leaves() {
        let l = 4;
        let t = star(l + 1);
        let marked = full(l + 2) & !1;
        let (u, top) = tree_find_subtree(&t, full(l + 2), 0, marked, l).unwrap();
        assert_eq!(top, 0);
        let got = popcount(u & marked & !bit(0)) as usize;
        assert!(l.div_ceil(2) <= got && got <= l);
    }

    #[test]
    fn single_heavy_child() {
        // Root 0 with one child 1 whose subtree holds exactly ℓ marked nodes.
        let t = Tree::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let (u, top) = tree_find_subtree(&t, full(4), 0, 0b1111, 3).unwrap();
        assert_eq!((u, top), (0b1111, 0));
    }

    #[test]
    fn marked_path_partition() {
        let t = path(10);
        let blocks = tree_edge_partition(&t, full(10), 3).unwrap();
        assert!(blocks.len() <= 3);
        let mut all: Vec<_> = blocks.concat();
        all.sort_unstable();
        assert_eq!(all, t.edges());
        for b in &blocks {
            assert!(popcount(block_nodes(b, 0)) <= 12);
        }
    }

    #[test]
    fn few_marks_give_one_block() {
        let t = path(5);
        assert_eq!(tree_edge_partition(&t, 0b1, 2).unwrap(), vec![t.edges()]);
        let single = Tree::from_edges(1, &[]).unwrap();
        assert_eq!(tree_edge_partition(&single, 1, 2).unwrap(), vec![vec![]]);
    }

    #[test]
    fn subset_graph_shapes() {
        let disjoint = subset_graph(&[0b001, 0b010, 0b100]);
        assert!(disjoint.connectors.is_empty());
        assert!(!disjoint.is_connected());
        let chain = subset_graph(&[0b0011, 0b0110, 0b1100]);
        assert_eq!(chain.connectors, vec![1, 2]);
        assert!(chain.is_tree());
        let cycle = subset_graph(&[0b011, 0b110, 0b101]);
        assert!(cycle.is_connected() && !cycle.is_tree());
    }
}
