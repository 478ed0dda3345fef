//! Exact arithmetic over ℤ and ℤ_p: prime search, canonical sparse
//! polynomials and the pairing function used to index parameterized families.

mod monomial;
mod poly;
mod prime;
mod text;

pub use monomial::Monomial;
pub(crate) use poly::reduce;
pub use poly::SparsePolynomial;
pub use prime::{
    find_prime_in_dyadic_interval, is_prime, next_prime, PrimeModulus, MAX_INTERVAL_EXPONENT,
};
pub(crate) use text::{content_lines, field, header_fields, parse_modulus};
pub use text::{parse_polynomial, write_polynomial};

/// Cantor pairing `(s+k)(s+k+1)/2 + k`; injective on ℕ².
pub fn cantor_pair(s: u64, k: u64) -> u128 {
    let d = s as u128 + k as u128;
    d * (d + 1) / 2 + k as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn cantor_pair_values_and_injectivity() {
        assert_eq!(cantor_pair(0, 0), 0);
        assert_eq!(cantor_pair(1, 0), 1);
        assert_eq!(cantor_pair(0, 1), 2);
        let mut seen = HashSet::new();
        for s in 0..=300 {
            for k in 0..=300 {
                assert!(seen.insert(cantor_pair(s, k)), "collision at ({s},{k})");
            }
        }
    }
}
