//! Small-set utilities over `u64` bitmasks. Every desk-scale ground set here
//! has at most 64 elements.

pub type Mask = u64;

#[inline]
pub fn popcount(m: Mask) -> u32 {
    m.count_ones()
}

#[inline]
pub fn contains(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

#[inline]
pub fn bit(i: usize) -> Mask {
    1u64 << i
}

#[inline]
pub fn full(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn elements(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Mask {
    it.into_iter().fold(0, |m, i| m | bit(i))
}

/// All submasks of `m` in increasing numeric order, including 0 and `m`.
pub fn submasks(m: Mask) -> Vec<Mask> {
    let mut out = Vec::with_capacity(1usize << popcount(m).min(20));
    let mut s: Mask = 0;
    loop {
        out.push(s);
        if s == m {
            break;
        }
        s = (s.wrapping_sub(m)) & m;
    }
    out
}

/// Submasks of `m` with at most `max` elements, in increasing numeric order.
pub fn submasks_upto(m: Mask, max: usize) -> Vec<Mask> {
    submasks(m)
        .into_iter()
        .filter(|&s| popcount(s) as usize <= max)
        .collect()
}

/// All `k`-subsets of `0..n` as masks, in colexicographic (Gosper) order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    let mut s: Mask = full(k);
    let limit = bit(n);
    while s < limit {
        out.push(s);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    out
}

/// All `k`-subsets of `0..n` as sorted index vectors in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Renders a mask as `{a,b,c}`.
pub fn show(m: Mask) -> String {
    let parts: Vec<String> = elements(m).map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subsets_count_matches_binomial() {
        for n in 0..10 {
            for k in 0..=n {
                let subs = k_subsets(n, k);
                assert_eq!(subs.len() as u128, binomial(n as u64, k as u64));
                assert!(subs.iter().all(|&s| popcount(s) as usize == k));
            }
        }
    }

    #[test]
    fn combinations_lexicographic() {
        let c = combinations(4, 2);
        assert_eq!(
            c,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn submasks_cover_powerset() {
        let m = 0b1011;
        let subs = submasks(m);
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|&s| s & !m == 0));
        assert_eq!(submasks(0), vec![0]);
    }
}
