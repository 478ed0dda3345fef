use crate::error::{Error, Result};

/// Largest interval exponent accepted by [`find_prime_in_dyadic_interval`].
pub const MAX_INTERVAL_EXPONENT: u32 = 60;

/// A prime modulus, optionally tagged with the exponent `t` of the dyadic
/// interval `[2^(t+1), 2^(t+2)]` it was drawn from. Equality ignores the tag.
#[derive(Debug, Clone, Copy)]
pub struct PrimeModulus {
    p: u64,
    t: Option<u32>,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::param(format!("{p} is not prime")));
        }
        Ok(Self { p, t: None })
    }

    pub fn value(&self) -> u64 {
        self.p
    }

    pub fn interval_exponent(&self) -> Option<u32> {
        self.t
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
}

impl PartialEq for PrimeModulus {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeModulus {}

/// Smallest prime `p` with `2^(t+1) <= p <= 2^(t+2)`.
///
/// Bertrand's postulate guarantees one exists; `t` is capped at
/// [`MAX_INTERVAL_EXPONENT`] so residues fit comfortably in a `u64`.
pub fn find_prime_in_dyadic_interval(t: u32) -> Result<PrimeModulus> {
    if t > MAX_INTERVAL_EXPONENT {
        return Err(Error::param(format!(
            "interval exponent t={t} exceeds {MAX_INTERVAL_EXPONENT}"
        )));
    }
    let lo = 1u64 << (t + 1);
    let hi = 1u64 << (t + 2);
    let mut c = lo;
    while c <= hi {
        if is_prime(c) {
            return Ok(PrimeModulus { p: c, t: Some(t) });
        }
        c += if c % 2 == 0 { 1 } else { 2 };
    }
    Err(Error::Invariant(format!("no prime in [{lo}, {hi}]")))
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Deterministic primality test: trial division below 10^6, Miller-Rabin
/// with the first thirteen prime bases (exact below 3.3e24) above.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < TRIAL_DIVISION_LIMIT {
        return trial_division(n);
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn trial_division(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_intervals() {
        assert_eq!(find_prime_in_dyadic_interval(0).unwrap().value(), 2);
        assert_eq!(find_prime_in_dyadic_interval(1).unwrap().value(), 5);
        assert_eq!(find_prime_in_dyadic_interval(3).unwrap().value(), 17);
    }

    #[test]
    fn t20_matches_trial_division_scan() {
        let lo = 1u64 << 21;
        let expected = (lo..).find(|&c| trial_division(c)).unwrap();
        assert_eq!(find_prime_in_dyadic_interval(20).unwrap().value(), expected);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            find_prime_in_dyadic_interval(61),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division_above_limit() {
        for n in TRIAL_DIVISION_LIMIT..TRIAL_DIVISION_LIMIT + 20_000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        // Strong pseudoprimes to several small bases.
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(341_550_071_728_321));
        assert!(is_prime((1u64 << 61) - 1));
    }

    #[test]
    fn every_interval_holds_a_prime() {
        for t in 0..=MAX_INTERVAL_EXPONENT {
            let p = find_prime_in_dyadic_interval(t).unwrap();
            assert!(is_prime(p.value()));
            assert!(p.value() >= 1 << (t + 1) && p.value() <= 1 << (t + 2));
            assert_eq!(p.interval_exponent(), Some(t));
        }
    }
}
