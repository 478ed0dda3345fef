//! Splitter families: colorings `[n] -> [ℓ]` such that every `k`-subset is
//! split evenly (or colored injectively) by at least one member.

mod build;
mod text;

pub use build::{
    build_code_splitter, build_greedy_splitter, build_interval_splitter, build_kwise_family,
    code_alphabet, compose_splitter, greedy_size_bound, ComposedSplitter, KWiseFamily,
    COMPOSE_MEMBER_CAP, GREEDY_RANGE_CAP, GREEDY_SUBSET_CAP, INTERVAL_MEMBER_CAP, KWISE_MEMBER_CAP,
};
pub use text::{parse_splitter, write_splitter};

use crate::bits::binomial;
use crate::error::{Error, Result};
use crate::par;

/// Largest `C(n, k)` accepted by [`verify_splitter`].
pub const VERIFY_SUBSET_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitKind {
    /// Color classes of every covered set differ in size by at most one.
    Even,
    /// Every covered set receives pairwise distinct colors.
    Injective,
}

impl SplitKind {
    pub fn tag(self) -> &'static str {
        match self {
            SplitKind::Even => "even",
            SplitKind::Injective => "injective",
        }
    }
}

impl std::str::FromStr for SplitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "even-split" => Ok(SplitKind::Even),
            "injective" => Ok(SplitKind::Injective),
            _ => Err(Error::param(format!("unknown splitter kind `{s}`"))),
        }
    }
}

/// An explicit family of colorings of `0..n` into `0..range`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitterFamily {
    n: usize,
    k: usize,
    range: usize,
    kind: SplitKind,
    members: Vec<Vec<u32>>,
}

impl SplitterFamily {
    pub fn new(
        n: usize,
        k: usize,
        range: usize,
        kind: SplitKind,
        members: Vec<Vec<u32>>,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::param("a splitter family needs at least one member"));
        }
        for (i, m) in members.iter().enumerate() {
            if m.len() != n {
                return Err(Error::param(format!(
                    "member {i} has {} entries, expected {n}",
                    m.len()
                )));
            }
            if let Some(&c) = m.iter().find(|&&c| c as usize >= range) {
                return Err(Error::param(format!(
                    "member {i} uses color {c} ≥ range {range}"
                )));
            }
        }
        Ok(Self {
            n,
            k,
            range,
            kind,
            members,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn kind(&self) -> SplitKind {
        self.kind
    }

    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Drops repeated colorings, keeping first occurrences in order.
    pub fn deduplicated(&self) -> Self {
        let mut seen = std::collections::HashSet::new();
        let members = self
            .members
            .iter()
            .filter(|m| seen.insert(m.as_slice()))
            .cloned()
            .collect();
        Self {
            members,
            ..self.clone()
        }
    }
}

/// Whether `coloring` treats `subset` as `mode` demands.
pub fn splits(coloring: &[u32], subset: &[usize], range: usize, mode: SplitKind) -> bool {
    let mut counts = vec![0usize; range];
    for &x in subset {
        counts[coloring[x] as usize] += 1;
    }
    match mode {
        SplitKind::Injective => counts.iter().all(|&c| c <= 1),
        SplitKind::Even => {
            let lo = subset.len() / range;
            let hi = subset.len().div_ceil(range);
            counts.iter().all(|&c| lo <= c && c <= hi)
        }
    }
}

/// Advances `c` to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive check over all `k`-subsets. Returns the lexicographically
/// smallest subset no member handles, or `None` when the family is a
/// splitter in the given mode.
pub fn verify_splitter(h: &SplitterFamily, mode: SplitKind) -> Result<Option<Vec<usize>>> {
    let (n, k) = (h.n, h.k);
    if k > n {
        return Ok(None);
    }
    if binomial(n as u64, k as u64) > VERIFY_SUBSET_CAP {
        return Err(Error::param(format!(
            "C({n},{k}) exceeds {VERIFY_SUBSET_CAP}"
        )));
    }
    const CHUNK: usize = 2048;
    let mut cur: Vec<usize> = (0..k).collect();
    let mut more = true;
    while more {
        let mut chunk = Vec::with_capacity(CHUNK);
        while more && chunk.len() < CHUNK {
            chunk.push(cur.clone());
            more = k > 0 && next_combination(&mut cur, n);
        }
        let ok = par::map(&chunk, |s| {
            h.members.iter().any(|m| splits(m, s, h.range, mode))
        });
        if let Some(i) = ok.iter().position(|&b| !b) {
            return Ok(Some(chunk.swap_remove(i)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_combinations() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all, crate::bits::combinations(4, 2));
    }

    #[test]
    fn identity_is_injective() {
        let h = SplitterFamily::new(5, 3, 5, SplitKind::Injective, vec![(0..5).collect()]).unwrap();
        assert_eq!(verify_splitter(&h, SplitKind::Injective).unwrap(), None);
    }

    #[test]
    fn constant_coloring_fails_on_first_pair() {
        let h = SplitterFamily::new(4, 2, 2, SplitKind::Injective, vec![vec![0; 4]]).unwrap();
        assert_eq!(
            verify_splitter(&h, SplitKind::Injective).unwrap(),
            Some(vec![0, 1])
        );
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // Colors 0 and 2 collide, so {0,2} is the first failing pair.
        let h = SplitterFamily::new(4, 2, 4, SplitKind::Injective, vec![vec![0, 1, 0, 3]]).unwrap();
        assert_eq!(
            verify_splitter(&h, SplitKind::Injective).unwrap(),
            Some(vec![0, 2])
        );
    }

    #[test]
    fn even_split_counts() {
        assert!(splits(&[0, 0, 1, 1], &[0, 1, 2], 2, SplitKind::Even));
        assert!(!splits(&[0, 0, 0, 1], &[0, 1, 2], 2, SplitKind::Even));
    }
}
