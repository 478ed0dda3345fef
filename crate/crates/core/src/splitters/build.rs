use super::{SplitKind, SplitterFamily};
use crate::algebra::next_prime;
use crate::bits::{binomial, ceil_div, combinations};
use crate::error::{Error, Result};
use crate::par;

/// Largest `C(n, ℓ-1)` accepted by [`build_interval_splitter`].
pub const INTERVAL_MEMBER_CAP: u128 = 10_000_000;
/// Largest `q^k` accepted by [`build_kwise_family`].
pub const KWISE_MEMBER_CAP: u128 = 10_000_000;
/// Largest `C(n, k)` accepted by [`build_greedy_splitter`].
pub const GREEDY_SUBSET_CAP: u128 = 1_000_000;
/// Largest range `c·k` accepted by [`build_greedy_splitter`] (colors are
/// tracked in a 128-bit set).
pub const GREEDY_RANGE_CAP: usize = 128;
/// Largest member count `|A|·|B|·|C|^L` accepted by [`compose_splitter`].
pub const COMPOSE_MEMBER_CAP: u128 = 10_000_000;

/// Number of base-`q` digits needed to write every element of `0..n`.
fn digits_needed(n: usize, q: usize) -> u32 {
    let mut d = 1;
    let mut reach = q as u128;
    while reach < n as u128 {
        reach *= q as u128;
        d += 1;
    }
    d
}

/// The prime alphabet of the code splitter: least prime `q >= k²` with
/// `2q >= d·k² + 2`, where `d` is the number of base-`q` digits of `n - 1`.
///
/// Two distinct digit polynomials agree on at most `d - 1` points, so `k`
/// codewords produce at most `(d-1)·k²/2 < q` collisions in total and some
/// coordinate separates all of them.
pub fn code_alphabet(n: usize, k: usize) -> usize {
    let k2 = (k * k) as u64;
    let mut q = next_prime(k2.max(2));
    loop {
        let d = digits_needed(n, q as usize) as u64;
        if 2 * q >= d * k2 + 2 {
            return q as usize;
        }
        q = next_prime(q + 1);
    }
}

/// Reed–Solomon style injective splitter with range `q`.
///
/// Element `x` is the polynomial whose coefficients are the base-`q` digits
/// of `x`; member `z` evaluates every such polynomial at `z`.
pub fn build_code_splitter(n: usize, k: usize) -> Result<SplitterFamily> {
    if !(2..=12).contains(&k) || n == 0 || n > 1_000_000 {
        return Err(Error::param(format!(
            "code splitter needs 2 ≤ k ≤ 12 and 1 ≤ n ≤ 10^6, got n={n} k={k}"
        )));
    }
    let q = code_alphabet(n, k);
    let d = digits_needed(n, q);
    let digits: Vec<Vec<u64>> = (0..n)
        .map(|x| {
            let mut x = x as u64;
            (0..d)
                .map(|_| {
                    let r = x % q as u64;
                    x /= q as u64;
                    r
                })
                .collect()
        })
        .collect();
    let members = (0..q as u64)
        .map(|z| {
            digits
                .iter()
                .map(|ds| {
                    ds.iter()
                        .rev()
                        .fold(0u64, |acc, &c| (acc * z + c) % q as u64) as u32
                })
                .collect()
        })
        .collect();
    SplitterFamily::new(n, k, q, SplitKind::Injective, members)
}

/// One member per choice of `ℓ - 1` cut positions among `1..n`; element `x`
/// gets the number of cuts at or below it. Members follow the
/// lexicographic order of their cut sets.
pub fn build_interval_splitter(n: usize, k: usize, l: usize) -> Result<SplitterFamily> {
    if l == 0 || l > k || k > n {
        return Err(Error::param(format!(
            "interval splitter needs 1 ≤ ℓ ≤ k ≤ n, got n={n} k={k} ℓ={l}"
        )));
    }
    if binomial(n as u64, l as u64 - 1) > INTERVAL_MEMBER_CAP {
        return Err(Error::param(format!(
            "C({n},{}) exceeds {INTERVAL_MEMBER_CAP}",
            l - 1
        )));
    }
    let members = combinations(n - 1, l - 1)
        .into_iter()
        .map(|cuts| {
            (0..n)
                .map(|x| cuts.iter().filter(|&&c| c < x).count() as u32)
                .collect()
        })
        .collect();
    SplitterFamily::new(n, k, l, SplitKind::Even, members)
}

/// Colorings `x ↦ (g(x) mod q) mod ℓ` for every polynomial `g` of degree
/// below `k` over the prime field of order `q >= max(n, ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KWiseFamily {
    pub n: usize,
    pub k: usize,
    pub range: usize,
    pub q: usize,
}

impl KWiseFamily {
    /// `q^k`.
    pub fn len(&self) -> usize {
        (self.q as u128).pow(self.k as u32) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Field values before reduction into the range. Coefficients are the
    /// base-`q` digits of `index`, lowest degree first.
    pub fn raw_member(&self, index: usize) -> Vec<u64> {
        let q = self.q as u64;
        let mut coeffs = Vec::with_capacity(self.k);
        let mut i = index as u64;
        for _ in 0..self.k {
            coeffs.push(i % q);
            i /= q;
        }
        (0..self.n as u64)
            .map(|x| coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % q))
            .collect()
    }

    pub fn member(&self, index: usize) -> Vec<u32> {
        self.raw_member(index)
            .into_iter()
            .map(|v| (v % self.range as u64) as u32)
            .collect()
    }
}

pub fn build_kwise_family(n: usize, k: usize, l: usize) -> Result<KWiseFamily> {
    if n == 0 || k == 0 || l == 0 {
        return Err(Error::param("k-wise family needs positive n, k, ℓ"));
    }
    let q = next_prime(n.max(l).max(2) as u64) as usize;
    if (q as u128)
        .checked_pow(k as u32)
        .map_or(true, |m| m > KWISE_MEMBER_CAP)
    {
        return Err(Error::param(format!("{q}^{k} exceeds {KWISE_MEMBER_CAP}")));
    }
    Ok(KWiseFamily { n, k, range: l, q })
}

/// Greedy injective splitter with range `c·k` drawn from the k-wise family.
///
/// Each round takes the member injective on the most still-uncovered
/// `k`-subsets (lowest index on ties). A round covering fewer than
/// `⌈e^{-k/c}·remaining⌉` subsets is reported as an invariant failure.
pub fn build_greedy_splitter(n: usize, k: usize, c: usize) -> Result<SplitterFamily> {
    if n == 0 || k == 0 || c == 0 || k > n {
        return Err(Error::param(format!(
            "greedy splitter needs 1 ≤ k ≤ n and c ≥ 1, got n={n} k={k} c={c}"
        )));
    }
    if binomial(n as u64, k as u64) > GREEDY_SUBSET_CAP {
        return Err(Error::param(format!(
            "C({n},{k}) exceeds {GREEDY_SUBSET_CAP}"
        )));
    }
    let range = c * k;
    if range > GREEDY_RANGE_CAP {
        return Err(Error::param(format!(
            "range c·k = {range} exceeds {GREEDY_RANGE_CAP}"
        )));
    }
    let family = build_kwise_family(n, k, range)?;
    let table: Vec<Vec<u32>> = par::map_range(family.len(), |i| family.member(i));
    let injective = |m: &[u32], s: &[usize]| {
        let mut seen = 0u128;
        s.iter().all(|&x| {
            let b = 1u128 << m[x];
            let fresh = seen & b == 0;
            seen |= b;
            fresh
        })
    };
    let rate = (-(k as f64) / c as f64).exp();
    let mut remaining = combinations(n, k);
    let mut members = Vec::new();
    while !remaining.is_empty() {
        let cover = par::map(&table, |m| {
            remaining.iter().filter(|s| injective(m, s)).count()
        });
        let (best, &got) = cover
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("family is nonempty");
        let need = (rate * remaining.len() as f64).ceil() as usize;
        if got < need || got == 0 {
            return Err(Error::Invariant(format!(
                "greedy round covered {got} of {} subsets, needed {need}",
                remaining.len()
            )));
        }
        let chosen = &table[best];
        remaining.retain(|s| !injective(chosen, s));
        members.push(chosen.clone());
    }
    SplitterFamily::new(n, k, range, SplitKind::Injective, members)
}

/// `⌈e^{k/c}·k·ln n⌉ + 1`, the size guarantee of the greedy splitter.
pub fn greedy_size_bound(n: usize, k: usize, c: usize) -> usize {
    ((k as f64 / c as f64).exp() * k as f64 * (n as f64).ln()).ceil() as usize + 1
}

/// A composed splitter together with the sizes of its three layers.
#[derive(Debug, Clone)]
pub struct ComposedSplitter {
    pub family: SplitterFamily,
    /// Members of the code layer `A` (also its range `q`).
    pub code_size: usize,
    /// Members of the interval layer `B`.
    pub interval_size: usize,
    /// Members of the greedy layer `C`.
    pub greedy_size: usize,
    /// Number of blocks `L = max(1, ⌈log₂ k⌉)`.
    pub blocks: usize,
    /// Range `R` of each greedy member.
    pub block_range: usize,
}

/// Injective splitter with range `R·L` built as
/// `f(x) = R·b(a(x)) + h_{b(a(x))}(a(x))`, ranging over `a ∈ A`, `b ∈ B` and
/// every `L`-tuple of greedy members (in that loop order).
pub fn compose_splitter(n: usize, k: usize, c: usize) -> Result<ComposedSplitter> {
    if k == 0 || c == 0 || k > n {
        return Err(Error::param(format!(
            "composed splitter needs 1 ≤ k ≤ n and c ≥ 1, got n={n} k={k} c={c}"
        )));
    }
    let blocks = (usize::BITS - (k - 1).leading_zeros()).max(1) as usize;
    let a = build_code_splitter(n, k.max(2))?;
    let q = a.range();
    let b = build_interval_splitter(q, k, blocks)?;
    let sub = ceil_div(k, blocks);
    let h = build_greedy_splitter(q, sub, c)?;
    let block_range = h.range();

    let tuples = (h.len() as u128).saturating_pow(blocks as u32);
    let total = (a.len() as u128 * b.len() as u128).saturating_mul(tuples);
    if total > COMPOSE_MEMBER_CAP {
        return Err(Error::param(format!(
            "composed family would have {total} members"
        )));
    }
    let mut members = Vec::with_capacity(total as usize);
    for am in a.members() {
        for bm in b.members() {
            for t in 0..tuples as usize {
                let mut pick = Vec::with_capacity(blocks);
                let mut r = t;
                for _ in 0..blocks {
                    pick.push(r % h.len());
                    r /= h.len();
                }
                pick.reverse();
                members.push(
                    am.iter()
                        .map(|&y| {
                            let blk = bm[y as usize] as usize;
                            (block_range * blk) as u32 + h.members()[pick[blk]][y as usize]
                        })
                        .collect(),
                );
            }
        }
    }
    Ok(ComposedSplitter {
        family: SplitterFamily::new(n, k, block_range * blocks, SplitKind::Injective, members)?,
        code_size: a.len(),
        interval_size: b.len(),
        greedy_size: h.len(),
        blocks,
        block_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitters::verify_splitter;

    #[test]
    fn code_alphabet_examples() {
        assert_eq!(code_alphabet(20, 3), 11);
        assert_eq!(code_alphabet(50, 3), 11);
        assert_eq!(code_alphabet(30, 4), 17);
    }

    #[test]
    fn code_splitter_on_constants_is_injective_everywhere() {
        let h = build_code_splitter(11, 3).unwrap();
        assert_eq!(h.range(), 11);
        for m in h.members() {
            let mut seen = m.clone();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), 11);
        }
    }

    #[test]
    fn interval_examples() {
        let one = build_interval_splitter(5, 3, 1).unwrap();
        assert_eq!(one.members(), &[vec![0; 5]]);
        let h = build_interval_splitter(6, 4, 2).unwrap();
        assert_eq!(h.len(), 5);
        assert_eq!(verify_splitter(&h, SplitKind::Even).unwrap(), None);
        let id = build_interval_splitter(4, 4, 4).unwrap();
        assert_eq!(id.members(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn kwise_sizes_and_uniformity() {
        let k1 = build_kwise_family(5, 1, 5).unwrap();
        assert_eq!(k1.len(), 5);
        assert!((0..5).all(|i| k1.member(i).iter().all(|&v| v as usize == i)));
        assert_eq!(build_kwise_family(5, 2, 4).unwrap().len(), 25);

        let f = build_kwise_family(7, 2, 7).unwrap();
        let mut tally = std::collections::HashMap::new();
        for i in 0..f.len() {
            let m = f.raw_member(i);
            for x in 0..7 {
                for y in 0..7 {
                    if x != y {
                        *tally.entry((x, y, m[x], m[y])).or_insert(0) += 1;
                    }
                }
            }
        }
        assert_eq!(tally.len(), 42 * 49);
        assert!(tally.values().all(|&c| c == 1));
    }

    #[test]
    fn greedy_examples() {
        let one = build_greedy_splitter(6, 1, 2).unwrap();
        assert_eq!(one.len(), 1);
        let h = build_greedy_splitter(8, 3, 2).unwrap();
        assert_eq!(verify_splitter(&h, SplitKind::Injective).unwrap(), None);
        assert!(h.len() <= greedy_size_bound(8, 3, 2));
    }

    #[test]
    fn composition_degenerates_for_small_k() {
        let s = compose_splitter(6, 2, 2).unwrap();
        assert_eq!(s.blocks, 1);
        assert_eq!(s.interval_size, 1);
        assert_eq!(
            verify_splitter(&s.family, SplitKind::Injective).unwrap(),
            None
        );
    }

    #[test]
    fn composition_size_and_correctness() {
        let s = compose_splitter(10, 3, 2).unwrap();
        assert_eq!(
            s.family.len(),
            s.code_size * s.interval_size * s.greedy_size.pow(s.blocks as u32)
        );
        assert_eq!(
            verify_splitter(&s.family, SplitKind::Injective).unwrap(),
            None
        );
    }
}
