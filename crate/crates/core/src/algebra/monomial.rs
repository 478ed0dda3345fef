use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A monomial `x_{i1}^{e1} * x_{i2}^{e2} * ...` stored sparsely with
/// strictly increasing variable indices and positive exponents.
///
/// Ordering is graded lexicographic: total degree first, then the exponent
/// vectors compared lexicographically with `x0 > x1 > ...`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    terms: SmallVec<[(u32, u32); 4]>,
    degree: u32,
}

impl Monomial {
    /// The empty product.
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(index: u32) -> Self {
        Self::from_sorted_unchecked([(index, 1)].into_iter().collect())
    }

    /// Builds a monomial from `(variable, exponent)` pairs in any order.
    /// Repeated variables are merged, zero exponents dropped.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32)>>(terms: I) -> Self {
        let mut v: SmallVec<[(u32, u32); 4]> = terms.into_iter().filter(|t| t.1 > 0).collect();
        v.sort_unstable_by_key(|t| t.0);
        let mut out: SmallVec<[(u32, u32); 4]> = SmallVec::with_capacity(v.len());
        for (i, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += e,
                _ => out.push((i, e)),
            }
        }
        Self::from_sorted_unchecked(out)
    }

    /// Builds a monomial from a multiset of variable indices.
    pub fn from_vars<I: IntoIterator<Item = u32>>(vars: I) -> Self {
        Self::from_terms(vars.into_iter().map(|v| (v, 1)))
    }

    fn from_sorted_unchecked(terms: SmallVec<[(u32, u32); 4]>) -> Self {
        let degree = terms.iter().map(|t| t.1).sum();
        Self { terms, degree }
    }

    pub fn terms(&self) -> &[(u32, u32)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest variable index, if any.
    pub fn max_var(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.terms, &other.terms);
        let mut out: SmallVec<[(u32, u32); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial {
            terms: out,
            degree: self.degree + other.degree,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let (a, b) = (&self.terms, &other.terms);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(va, ea)), Some(&(vb, eb))) => {
                        // The smaller index is the more significant coordinate.
                        if va < vb {
                            return Ordering::Greater;
                        }
                        if vb < va {
                            return Ordering::Less;
                        }
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders `1` for the empty product and `x0^2*x3` otherwise.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(m: &Monomial, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for &(i, e) in m.terms() {
            v[i as usize] = e;
        }
        v
    }

    #[test]
    fn canonical_construction() {
        let m = Monomial::from_terms([(3, 1), (0, 2), (3, 2), (1, 0)]);
        assert_eq!(m.terms(), &[(0, 2), (3, 3)]);
        assert_eq!(m.degree(), 5);
        assert_eq!(Monomial::from_vars([2, 0, 2]).terms(), &[(0, 1), (2, 2)]);
    }

    #[test]
    fn grlex_examples() {
        let x0 = Monomial::var(0);
        let x1 = Monomial::var(1);
        assert!(Monomial::one() < x1);
        assert!(x1 < x0);
        assert!(x0 < x1.mul(&x1));
        assert!(x1.mul(&x1) < x0.mul(&x1));
        assert!(x0.mul(&x1) < x0.mul(&x0));
    }

    proptest::proptest! {
        #[test]
        fn grlex_matches_dense_comparison(
            a in proptest::collection::vec(0u32..3, 5),
            b in proptest::collection::vec(0u32..3, 5),
        ) {
            let ma = Monomial::from_terms(a.iter().enumerate().map(|(i, &e)| (i as u32, e)));
            let mb = Monomial::from_terms(b.iter().enumerate().map(|(i, &e)| (i as u32, e)));
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            let expected = da.cmp(&db).then_with(|| dense(&ma, 5).cmp(&dense(&mb, 5)));
            proptest::prop_assert_eq!(ma.cmp(&mb), expected);
            let prod = ma.mul(&mb);
            let dp: Vec<u32> = dense(&prod, 5);
            let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            proptest::prop_assert_eq!(dp, sum);
        }
    }
}
