use std::fmt;

use crate::bits::{show, Mask};

/// Semantic name of one formulation variable.
///
/// Node, element and color sets are bitmasks. Block and set indices are
/// 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VariableKey {
    /// Hamiltonian path of `G[S]` from `u` whose end has an edge to `v`
    /// (any end when `v` is `None`).
    HamSeg { s: Mask, u: usize, v: Option<usize> },
    /// `S` is independent.
    IndepSet { s: Mask },
    /// `τ` (the set of true variables among the blocks `B`) satisfies at
    /// least `r` clauses assigned to `B`.
    MaxSat { blocks: Mask, tau: Mask, r: usize },
    /// `χ(G[S]) ≤ r`.
    ColorBudget { s: Mask, r: usize },
    /// `S` is independent (coloring's large-class certificate).
    ColorIndep { s: Mask },
    /// `S` is covered by at most `r` family sets.
    Cover { s: Mask, r: usize },
    /// `S ⊆ F_i`.
    CoverIn { s: Mask, i: usize },
    /// `G[A ⊔ B ⊔ C]` has a perfect matching.
    Matching { a: Mask, b: Mask, c: Mask },
    /// `A ⊔ B` covers every edge of `G[V_i ⊔ V_j]`.
    VertexCover {
        i: usize,
        j: usize,
        a: Mask,
        b: Mask,
    },
    /// A Steiner tree for the terminals at positions `terms` plus the nodes
    /// `a` has weight at most `l`.
    Steiner { terms: Mask, a: Mask, l: usize },
    /// `l ≤ t`.
    Budget { l: usize },
    /// `G[S]` plus a pendant leaf on each node of `A` has a spanning tree
    /// with at least `k` internal nodes, or `k + |A|` leaves.
    SpanTree { s: Mask, a: Mask, k: usize },
    /// Every node of `N` has a neighbor in `D`.
    NonBlocker { n: Mask, d: Mask },
    /// `(A, B)` splits every family set indexed by `L`.
    Split { a: Mask, b: Mask, l: Mask },
    /// Under coloring `f`, a path from `u` to `v` uses each color of `C`
    /// exactly once.
    KPath {
        f: usize,
        c: Mask,
        u: usize,
        v: usize,
    },
    /// `(u, v)` is an edge.
    Edge { u: usize, v: usize },
}

impl fmt::Display for VariableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use VariableKey::*;
        match *self {
            HamSeg { s, u, v } => match v {
                Some(v) => write!(f, "seg S={} u={u} v={v}", show(s)),
                None => write!(f, "seg S={} u={u} v=end", show(s)),
            },
            IndepSet { s } => write!(f, "indep S={}", show(s)),
            MaxSat { blocks, tau, r } => {
                write!(f, "sat B={} tau={} r={r}", show(blocks), show(tau))
            }
            ColorBudget { s, r } => write!(f, "chi S={} r={r}", show(s)),
            ColorIndep { s } => write!(f, "indep S={}", show(s)),
            Cover { s, r } => write!(f, "cover S={} r={r}", show(s)),
            CoverIn { s, i } => write!(f, "within S={} i={i}", show(s)),
            Matching { a, b, c } => {
                write!(f, "match A={} B={} C={}", show(a), show(b), show(c))
            }
            VertexCover { i, j, a, b } => {
                write!(f, "vc i={i} j={j} A={} B={}", show(a), show(b))
            }
            Steiner { terms, a, l } => {
                write!(f, "steiner T={} A={} l={l}", show(terms), show(a))
            }
            Budget { l } => write!(f, "total l={l}"),
            SpanTree { s, a, k } => write!(f, "span S={} A={} k={k}", show(s), show(a)),
            NonBlocker { n, d } => write!(f, "dom N={} D={}", show(n), show(d)),
            Split { a, b, l } => {
                write!(f, "split A={} B={} L={}", show(a), show(b), show(l))
            }
            KPath { f: fi, c, u, v } => write!(f, "path f={fi} C={} u={u} v={v}", show(c)),
            Edge { u, v } => write!(f, "edge u={u} v={v}"),
        }
    }
}
