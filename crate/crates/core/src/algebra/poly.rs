use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

use super::{Monomial, PrimeModulus};
use crate::error::{Error, Result};

/// Canonical sparse multivariate polynomial over ℤ or ℤ_p.
///
/// Terms are kept sorted in graded lexicographic order with no zero
/// coefficients, so two polynomials are equal exactly when their term
/// vectors are. Over ℤ_p every coefficient lies in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    nvars: usize,
    modulus: Option<PrimeModulus>,
    degree_bound: u32,
    terms: Vec<(Monomial, BigInt)>,
}

pub(crate) fn reduce(c: &BigInt, p: u64) -> BigInt {
    let r = c % p;
    if r.sign() == Sign::Minus {
        r + p
    } else {
        r
    }
}

impl SparsePolynomial {
    pub fn zero(nvars: usize, degree_bound: u32, modulus: Option<PrimeModulus>) -> Self {
        Self {
            nvars,
            modulus,
            degree_bound,
            terms: Vec::new(),
        }
    }

    /// Collects terms, merging repeated monomials and dropping zeros.
    pub fn from_terms<I>(
        nvars: usize,
        degree_bound: u32,
        modulus: Option<PrimeModulus>,
        terms: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            if let Some(v) = m.max_var() {
                if v as usize >= nvars {
                    return Err(Error::param(format!(
                        "variable x{v} out of range for {nvars} variables"
                    )));
                }
            }
            if m.degree() > degree_bound {
                return Err(Error::param(format!(
                    "monomial {m} exceeds degree bound {degree_bound}"
                )));
            }
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Ok(Self::from_sorted_map(nvars, degree_bound, modulus, acc))
    }

    fn from_sorted_map(
        nvars: usize,
        degree_bound: u32,
        modulus: Option<PrimeModulus>,
        acc: BTreeMap<Monomial, BigInt>,
    ) -> Self {
        let terms = acc
            .into_iter()
            .map(|(m, c)| match modulus {
                Some(p) => (m, reduce(&c, p.value())),
                None => (m, c),
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self {
            nvars,
            modulus,
            degree_bound,
            terms,
        }
    }

    /// Builds directly from terms already in canonical order with nonzero,
    /// reduced coefficients. Checked in debug builds only.
    pub(crate) fn from_canonical(
        nvars: usize,
        degree_bound: u32,
        modulus: Option<PrimeModulus>,
        terms: Vec<(Monomial, BigInt)>,
    ) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(m, c)| !c.is_zero()
            && m.degree() <= degree_bound
            && m.max_var().map_or(true, |v| (v as usize) < nvars)));
        Self {
            nvars,
            modulus,
            degree_bound,
            terms,
        }
    }

    pub fn constant(
        nvars: usize,
        degree_bound: u32,
        modulus: Option<PrimeModulus>,
        c: BigInt,
    ) -> Self {
        Self::from_sorted_map(
            nvars,
            degree_bound,
            modulus,
            BTreeMap::from([(Monomial::one(), c)]),
        )
    }

    pub fn variable(
        nvars: usize,
        degree_bound: u32,
        modulus: Option<PrimeModulus>,
        index: u32,
    ) -> Result<Self> {
        Self::from_terms(
            nvars,
            degree_bound,
            modulus,
            [(Monomial::var(index), BigInt::one())],
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> Option<PrimeModulus> {
        self.modulus
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`SparsePolynomial::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Largest total degree among stored monomials (0 for the zero polynomial).
    pub fn max_degree(&self) -> u32 {
        self.terms.last().map_or(0, |(m, _)| m.degree())
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        match self.terms.binary_search_by(|(t, _)| t.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Sum of all coefficients, i.e. the value at the all-ones point.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn with_degree_bound(mut self, degree_bound: u32) -> Result<Self> {
        if self.max_degree() > degree_bound {
            return Err(Error::param(format!(
                "polynomial has degree {} > {degree_bound}",
                self.max_degree()
            )));
        }
        self.degree_bound = degree_bound;
        Ok(self)
    }

    /// Same polynomial viewed in a larger variable space.
    pub fn with_nvars(mut self, nvars: usize) -> Result<Self> {
        if nvars < self.nvars {
            return Err(Error::param("cannot shrink the variable space"));
        }
        self.nvars = nvars;
        Ok(self)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::IncompatibleRing(format!(
                "modulus {} vs {}",
                show_modulus(self.modulus),
                show_modulus(other.modulus)
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::IncompatibleRing(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    fn normalize(&self, c: BigInt) -> BigInt {
        match self.modulus {
            Some(p) => reduce(&c, p.value()),
            None => c,
        }
    }

    /// Coefficient-wise sum by merging the two sorted term lists.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = self.normalize(&a[i].1 + &b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Self::from_canonical(
            self.nvars,
            self.degree_bound.max(other.degree_bound),
            self.modulus,
            out,
        ))
    }

    /// Product with every monomial of degree above `delta` discarded.
    pub fn mul_truncated(&self, other: &Self, delta: u32) -> Result<Self> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            if ma.degree() > delta {
                // Terms are sorted by degree; nothing later fits either.
                break;
            }
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > delta {
                    break;
                }
                *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Ok(Self::from_sorted_map(self.nvars, delta, self.modulus, acc))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &BigInt) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), self.normalize(x * c)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        Self::from_canonical(self.nvars, self.degree_bound, self.modulus, terms)
    }

    /// The degree-`d` homogeneous part.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .cloned()
            .collect();
        Self::from_canonical(self.nvars, self.degree_bound, self.modulus, terms)
    }

    /// Drops every monomial of degree above `delta`.
    pub fn truncate(&self, delta: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= delta)
            .cloned()
            .collect();
        Self::from_canonical(self.nvars, delta, self.modulus, terms)
    }

    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == d)
    }

    /// Reduces every coefficient into `[0, p)`.
    pub fn reduce_mod(&self, p: PrimeModulus) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), reduce(c, p.value())))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self::from_canonical(self.nvars, self.degree_bound, Some(p), terms)
    }

    /// Exact value at `point` (reduced mod p when a modulus is present).
    pub fn eval(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut total = BigInt::zero();
        'terms: for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(i, e) in m.terms() {
                let x = &point[i as usize];
                if x.is_zero() {
                    continue 'terms;
                }
                if !x.is_one() {
                    v *= num_traits::pow(x.clone(), e as usize);
                    if let Some(p) = self.modulus {
                        v = reduce(&v, p.value());
                    }
                }
            }
            total += v;
        }
        Ok(self.normalize(total))
    }

    /// Value at a 0/1 point: the sum of coefficients of monomials whose
    /// variables are all set.
    pub fn eval_binary(&self, point: &[bool]) -> Result<BigInt> {
        if point.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let total: BigInt = self
            .terms
            .iter()
            .filter(|(m, _)| m.terms().iter().all(|&(i, _)| point[i as usize]))
            .map(|(_, c)| c)
            .sum();
        Ok(self.normalize(total))
    }
}

pub(crate) fn show_modulus(m: Option<PrimeModulus>) -> String {
    m.map_or_else(|| "none".to_string(), |p| p.value().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::find_prime_in_dyadic_interval;
    use proptest::prelude::*;

    fn poly(nvars: usize, m: Option<PrimeModulus>, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            nvars,
            8,
            m,
            terms
                .iter()
                .map(|(vs, c)| (Monomial::from_vars(vs.iter().copied()), BigInt::from(*c))),
        )
        .unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn add_examples() {
        let a = poly(1, None, &[(&[0], 1), (&[], 1)]);
        let b = poly(1, None, &[(&[0], 1)]);
        assert_eq!(a.add(&b).unwrap(), poly(1, None, &[(&[0], 2), (&[], 1)]));
        let zero = SparsePolynomial::zero(1, 0, None);
        assert_eq!(a.add(&zero).unwrap(), a);

        let p7 = Some(PrimeModulus::new(7).unwrap());
        let c = poly(1, p7, &[(&[0], 5)]);
        let d = poly(1, p7, &[(&[0], 4)]);
        assert_eq!(c.add(&d).unwrap(), poly(1, p7, &[(&[0], 2)]));
        assert!(matches!(c.add(&b), Err(Error::IncompatibleRing(_))));
    }

    #[test]
    fn mul_examples() {
        let s = poly(2, None, &[(&[0], 1), (&[1], 1)]);
        let sq = s.mul_truncated(&s, 2).unwrap();
        assert_eq!(
            sq,
            poly(2, None, &[(&[0, 0], 1), (&[0, 1], 2), (&[1, 1], 1)])
                .with_degree_bound(2)
                .unwrap()
        );
        let x0 = poly(2, None, &[(&[0], 1)]);
        let x1 = poly(2, None, &[(&[1], 1)]);
        assert!(x0.mul_truncated(&x1, 1).unwrap().is_zero());
    }

    #[test]
    fn eval_examples() {
        let p = poly(3, None, &[(&[0, 1], 1), (&[2], 1)]);
        assert_eq!(p.eval(&big(&[1, 1, 0])).unwrap(), BigInt::from(1));
        let q = poly(3, None, &[(&[0, 1], 4), (&[], -3)]);
        assert_eq!(q.eval(&big(&[0, 0, 0])).unwrap(), BigInt::from(-3));
        assert!(matches!(q.eval(&big(&[1])), Err(Error::Arity { .. })));
    }

    #[test]
    fn reduce_examples() {
        let t = 5;
        let p = find_prime_in_dyadic_interval(t).unwrap();
        let a = poly(1, None, &[(&[0], 1 << t), (&[], 1)]);
        let r = a.reduce_mod(p);
        assert_eq!(r.terms(), a.terms());
        let b = poly(1, None, &[(&[0], p.value() as i64), (&[], 3)]);
        assert_eq!(b.reduce_mod(p).terms(), poly(1, None, &[(&[], 3)]).terms());
        let neg = poly(1, None, &[(&[0], -1)]);
        assert_eq!(
            neg.reduce_mod(p).coefficient(&Monomial::var(0)),
            BigInt::from(p.value() - 1)
        );
    }

    fn arb_poly(nvars: usize, max_deg: usize) -> impl Strategy<Value = SparsePolynomial> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0..nvars as u32, 0..=max_deg),
                -20i64..20,
            ),
            0..8,
        )
        .prop_map(move |ts| {
            SparsePolynomial::from_terms(
                nvars,
                max_deg as u32,
                None,
                ts.into_iter()
                    .map(|(vs, c)| (Monomial::from_vars(vs), BigInt::from(c))),
            )
            .unwrap()
        })
    }

    /// Naive product without truncation, via a dense exponent-vector map.
    fn naive_mul(a: &SparsePolynomial, b: &SparsePolynomial) -> BTreeMap<Vec<u32>, BigInt> {
        let n = a.nvars();
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let mut e = vec![0u32; n];
                for &(i, x) in ma.terms().iter().chain(mb.terms()) {
                    e[i as usize] += x;
                }
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    proptest! {
        #[test]
        fn add_commutes_bit_exactly(a in arb_poly(3, 3), b in arb_poly(3, 3)) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        }

        #[test]
        fn add_associates(a in arb_poly(3, 3), b in arb_poly(3, 3), c in arb_poly(3, 3)) {
            prop_assert_eq!(
                a.add(&b).unwrap().add(&c).unwrap(),
                a.add(&b.add(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn mul_distributes(a in arb_poly(3, 2), b in arb_poly(3, 2), c in arb_poly(3, 2)) {
            let lhs = a.mul_truncated(&b.add(&c).unwrap(), 4).unwrap();
            let rhs = a.mul_truncated(&b, 4).unwrap().add(&a.mul_truncated(&c, 4).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn wide_truncation_equals_naive_product(a in arb_poly(3, 2), b in arb_poly(3, 2)) {
            let prod = a.mul_truncated(&b, 4).unwrap();
            let mut dense = BTreeMap::new();
            for (m, c) in prod.terms() {
                let mut e = vec![0u32; 3];
                for &(i, x) in m.terms() { e[i as usize] = x; }
                dense.insert(e, c.clone());
            }
            prop_assert_eq!(dense, naive_mul(&a, &b));
        }

        #[test]
        fn eval_is_a_ring_homomorphism_mod_p(
            a in arb_poly(3, 3),
            x in proptest::collection::vec(-50i64..50, 3),
        ) {
            let p = PrimeModulus::new(17).unwrap();
            let point = big(&x);
            let reduced_point: Vec<BigInt> = point.iter().map(|v| reduce(v, 17)).collect();
            let lhs = a.reduce_mod(p).eval(&reduced_point).unwrap();
            let rhs = reduce(&a.eval(&point).unwrap(), 17);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduce_mod_matches_per_coefficient(a in arb_poly(3, 3)) {
            let p = PrimeModulus::new(17).unwrap();
            let r = a.reduce_mod(p);
            for (m, c) in a.terms() {
                prop_assert_eq!(r.coefficient(m), reduce(c, 17));
            }
            prop_assert!(r.terms().iter().all(|(m, _)| !a.coefficient(m).is_zero()));
        }
    }
}
