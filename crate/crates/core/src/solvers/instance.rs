//! Problem instances and their text formats.

use std::fmt::Write as _;

use crate::algebra::{content_lines, field, header_fields};
use crate::bits::{bit, contains, Mask};
use crate::error::{Error, Result};

/// Largest node count of any graph instance (nodes index bits of a `u64`).
pub const MAX_NODES: usize = 64;

/// Simple graph on `0..n` without self-loops or parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    weighted: bool,
    out: Vec<Mask>,
    inc: Vec<Mask>,
    edges: Vec<(usize, usize, u64)>,
}

impl Graph {
    pub fn new(n: usize, directed: bool) -> Result<Self> {
        if n > MAX_NODES {
            return Err(Error::param(format!(
                "graphs are limited to {MAX_NODES} nodes"
            )));
        }
        Ok(Self {
            n,
            directed,
            weighted: false,
            out: vec![0; n],
            inc: vec![0; n],
            edges: Vec::new(),
        })
    }

    pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n, false)?;
        for &(u, v) in edges {
            g.add_edge(u, v, 1)?;
        }
        Ok(g)
    }

    pub fn directed(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n, true)?;
        for &(u, v) in edges {
            g.add_edge(u, v, 1)?;
        }
        Ok(g)
    }

    pub fn weighted(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut g = Self::new(n, false)?;
        g.weighted = true;
        for &(u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: u64) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::param(format!("edge ({u},{v}) out of range")));
        }
        if u == v {
            return Err(Error::param(format!("self-loop at {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::param(format!("duplicate edge ({u},{v})")));
        }
        if w != 1 {
            self.weighted = true;
        }
        self.out[u] |= bit(v);
        self.inc[v] |= bit(u);
        if !self.directed {
            self.out[v] |= bit(u);
            self.inc[u] |= bit(v);
        }
        self.edges.push((u, v, w));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    /// Edges in insertion order as `(u, v, weight)`.
    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        contains(self.out[u], v)
    }

    /// Out-neighbors (all neighbors when undirected).
    pub fn out_neighbors(&self, u: usize) -> Mask {
        self.out[u]
    }

    pub fn in_neighbors(&self, u: usize) -> Mask {
        self.inc[u]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        self.edges.iter().find_map(|&(a, b, w)| {
            ((a, b) == (u, v) || (!self.directed && (a, b) == (v, u))).then_some(w)
        })
    }

    /// Undirected complement (no loops).
    pub fn complement(&self) -> Self {
        let mut g = Self::new(self.n, false).expect("same size");
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) && !self.has_edge(v, u) {
                    g.add_edge(u, v, 1).expect("fresh edge");
                }
            }
        }
        g
    }

    /// Whether the nodes of `nodes` induce a connected subgraph (ignoring
    /// direction). The empty set counts as connected.
    pub fn is_connected_on(&self, nodes: Mask) -> bool {
        if nodes == 0 {
            return true;
        }
        let start = nodes.trailing_zeros() as usize;
        let mut seen = bit(start);
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let next = (self.out[v] | self.inc[v]) & nodes & !seen;
            seen |= next;
            frontier |= next;
        }
        seen == nodes
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_on(crate::bits::full(self.n))
    }
}

/// CNF formula over variables `1..=n` with DIMACS-style signed literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub nvars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(nvars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if nvars > MAX_NODES {
            return Err(Error::param(format!(
                "formulas are limited to {MAX_NODES} variables"
            )));
        }
        for c in &clauses {
            if let Some(&l) = c
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() as usize > nvars)
            {
                return Err(Error::param(format!("literal {l} out of range")));
            }
        }
        Ok(Self { nvars, clauses })
    }

    /// Longest clause length.
    pub fn width(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Mask of the 0-based variables occurring in clause `c`.
    pub fn clause_vars(&self, c: usize) -> Mask {
        self.clauses[c]
            .iter()
            .fold(0, |m, &l| m | bit(l.unsigned_abs() as usize - 1))
    }

    /// Whether clause `c` holds under `values` (bit `i` = variable `i+1`).
    pub fn clause_satisfied(&self, c: usize, values: Mask) -> bool {
        self.clauses[c].iter().any(|&l| {
            let v = contains(values, l.unsigned_abs() as usize - 1);
            (l > 0) == v
        })
    }
}

/// Family of subsets of the universe `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    pub n: usize,
    pub sets: Vec<Mask>,
}

impl SetFamily {
    pub fn new(n: usize, sets: Vec<Mask>) -> Result<Self> {
        if n > MAX_NODES {
            return Err(Error::param(format!(
                "universes are limited to {MAX_NODES} elements"
            )));
        }
        if sets.iter().any(|&s| s & !crate::bits::full(n) != 0) {
            return Err(Error::param("set element out of range"));
        }
        Ok(Self { n, sets })
    }
}

/// 3-partite 3-uniform hypergraph with parts `0..n` each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph3 {
    pub n: usize,
    pub triples: Vec<(usize, usize, usize)>,
}

impl Hypergraph3 {
    pub fn new(n: usize, triples: Vec<(usize, usize, usize)>) -> Result<Self> {
        if n > MAX_NODES {
            return Err(Error::param(format!(
                "parts are limited to {MAX_NODES} nodes"
            )));
        }
        if triples.iter().any(|&(a, b, c)| a >= n || b >= n || c >= n) {
            return Err(Error::param("triple outside its parts"));
        }
        Ok(Self { n, triples })
    }
}

/// Any instance a formulation can be evaluated on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemInstance {
    Graph(Graph),
    Cnf(CnfFormula),
    Family(SetFamily),
    Hyper(Hypergraph3),
}

impl ProblemInstance {
    pub fn kind(&self) -> &'static str {
        match self {
            ProblemInstance::Graph(_) => "graph",
            ProblemInstance::Cnf(_) => "cnf",
            ProblemInstance::Family(_) => "family",
            ProblemInstance::Hyper(_) => "hyper3",
        }
    }
}

fn numbers<T: std::str::FromStr>(line: &str, ln: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|w| {
            w.parse()
                .map_err(|_| Error::parse(ln, format!("bad number `{w}`")))
        })
        .collect()
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let f = header_fields(header, "graph", hl)?;
    let directed: u8 = field(&f, "directed", hl)?;
    let weighted: u8 = field(&f, "weighted", hl)?;
    let n: usize = field(&f, "n", hl)?;
    let m: usize = field(&f, "m", hl)?;
    if directed > 1 || weighted > 1 {
        return Err(Error::parse(hl, "flags must be 0 or 1"));
    }
    let mut g = Graph::new(n, directed == 1).map_err(|e| Error::parse(hl, e))?;
    g.weighted = weighted == 1;
    let mut count = 0;
    for (ln, line) in lines {
        let nums: Vec<u64> = numbers(line, ln)?;
        let (u, v, w) = match (weighted, nums.as_slice()) {
            (0, [u, v]) => (*u, *v, 1),
            (1, [u, v, w]) => (*u, *v, *w),
            _ => return Err(Error::parse(ln, "wrong number of fields on edge line")),
        };
        g.add_edge(u as usize, v as usize, w)
            .map_err(|e| Error::parse(ln, e))?;
        count += 1;
    }
    if count != m {
        return Err(Error::parse(
            0,
            format!("header says {m} edges, found {count}"),
        ));
    }
    g.weighted = weighted == 1;
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "graph directed={} weighted={} n={} m={}",
        u8::from(g.directed),
        u8::from(g.weighted),
        g.n,
        g.edges.len()
    );
    for &(u, v, w) in &g.edges {
        let _ = if g.weighted {
            writeln!(out, "{u} {v} {w}")
        } else {
            writeln!(out, "{u} {v}")
        };
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (ln, line) in content_lines(text) {
        if line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let w: Vec<&str> = line.split_whitespace().collect();
            match w.as_slice() {
                ["p", "cnf", n, m] => {
                    let n: usize = n
                        .parse()
                        .map_err(|_| Error::parse(ln, "bad variable count"))?;
                    let m: usize = m
                        .parse()
                        .map_err(|_| Error::parse(ln, "bad clause count"))?;
                    header = Some((n, m));
                }
                _ => return Err(Error::parse(ln, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        if header.is_none() {
            return Err(Error::parse(ln, "clause before `p cnf` header"));
        }
        for l in numbers::<i32>(line, ln)? {
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(1, "missing `p cnf` header"))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != m {
        return Err(Error::parse(
            0,
            format!("header says {m} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(n, clauses).map_err(|e| Error::parse(0, e))
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.nvars, f.clauses.len());
    for c in &f.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (hl, header) = lines
        .find(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Error::parse(1, "empty input"))?;
    let f = header_fields(header, "family", hl)?;
    let n: usize = field(&f, "n", hl)?;
    let m: usize = field(&f, "m", hl)?;
    // Empty lines after the header are empty sets.
    let mut sets = Vec::new();
    for (ln, line) in lines.take(m) {
        let elems: Vec<usize> = numbers(line, ln)?;
        if let Some(&e) = elems.iter().find(|&&e| e >= n) {
            return Err(Error::parse(ln, format!("element {e} out of range")));
        }
        sets.push(crate::bits::from_iter(elems));
    }
    if sets.len() != m {
        return Err(Error::parse(
            0,
            format!("header says {m} sets, found {}", sets.len()),
        ));
    }
    SetFamily::new(n, sets).map_err(|e| Error::parse(0, e))
}

pub fn write_family(f: &SetFamily) -> String {
    let mut out = format!("family n={} m={}\n", f.n, f.sets.len());
    for &s in &f.sets {
        let elems: Vec<String> = crate::bits::elements(s).map(|e| e.to_string()).collect();
        out.push_str(&elems.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_hyper3(text: &str) -> Result<Hypergraph3> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let f = header_fields(header, "hyper3", hl)?;
    let n: usize = field(&f, "n", hl)?;
    let m: usize = field(&f, "m", hl)?;
    let mut triples = Vec::new();
    for (ln, line) in lines {
        match numbers::<usize>(line, ln)?.as_slice() {
            [a, b, c] if *a < n && *b < n && *c < n => triples.push((*a, *b, *c)),
            [_, _, _] => return Err(Error::parse(ln, "triple outside its parts")),
            _ => return Err(Error::parse(ln, "expected `a b c`")),
        }
    }
    if triples.len() != m {
        return Err(Error::parse(
            0,
            format!("header says {m} triples, found {}", triples.len()),
        ));
    }
    Hypergraph3::new(n, triples).map_err(|e| Error::parse(0, e))
}

pub fn write_hyper3(h: &Hypergraph3) -> String {
    let mut out = format!("hyper3 n={} m={}\n", h.n, h.triples.len());
    for &(a, b, c) in &h.triples {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    out
}

/// Reads any instance format, dispatching on the first header word.
pub fn parse_instance(text: &str) -> Result<ProblemInstance> {
    let first = content_lines(text)
        .find(|(_, l)| !l.starts_with('c'))
        .map(|(_, l)| l.split_whitespace().next().unwrap_or(""));
    match first {
        Some("graph") => parse_graph(text).map(ProblemInstance::Graph),
        Some("family") => parse_family(text).map(ProblemInstance::Family),
        Some("hyper3") => parse_hyper3(text).map(ProblemInstance::Hyper),
        Some("p") => parse_dimacs(text).map(ProblemInstance::Cnf),
        _ => Err(Error::parse(1, "unrecognized instance format")),
    }
}

pub fn write_instance(x: &ProblemInstance) -> String {
    match x {
        ProblemInstance::Graph(g) => write_graph(g),
        ProblemInstance::Cnf(f) => write_dimacs(f),
        ProblemInstance::Family(f) => write_family(f),
        ProblemInstance::Hyper(h) => write_hyper3(h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_format() {
        let text = "graph directed=1 weighted=0 n=3 m=2\n0 1\n1 2\n";
        let g = parse_graph(text).unwrap();
        assert!(g.has_edge(0, 1) && !g.has_edge(1, 0));
        assert_eq!(write_graph(&g), text);
        let w = parse_graph("graph directed=0 weighted=1 n=2 m=1\n0 1 5\n").unwrap();
        assert_eq!(w.weight(1, 0), Some(5));
        for bad in [
            "graph directed=0 weighted=0 n=2 m=2\n0 1\n",
            "graph directed=0 weighted=0 n=2 m=1\n0 2\n",
            "graph directed=0 weighted=0 n=2 m=1\n0 0\n",
            "graph directed=0 n=2 m=0\n",
            "graph directed=0 weighted=0 n=2 m=1\n0 x\n",
        ] {
            assert!(
                matches!(parse_graph(bad), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn other_formats() {
        let cnf = parse_dimacs("c demo\np cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
        assert_eq!(cnf.clauses, vec![vec![1, -2], vec![2, 3]]);
        assert_eq!(parse_dimacs(&write_dimacs(&cnf)).unwrap(), cnf);
        let fam = parse_family("family n=4 m=3\n0 1\n\n3\n").unwrap();
        assert_eq!(fam.sets, vec![0b11, 0, 0b1000]);
        assert_eq!(parse_family(&write_family(&fam)).unwrap(), fam);
        let h = parse_hyper3("hyper3 n=2 m=1\n0 1 1\n").unwrap();
        assert_eq!(parse_hyper3(&write_hyper3(&h)).unwrap(), h);
        assert!(parse_hyper3("hyper3 n=2 m=1\n0 1 2\n").is_err());
        assert!(matches!(
            parse_instance("nonsense"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn connectivity() {
        let g = Graph::undirected(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert!(g.is_connected_on(0b0011));
        assert!(g.complement().is_connected());
    }
}
