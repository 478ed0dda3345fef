//! Line-oriented polynomial text format.
//!
//! ```text
//! poly nvars=3 degree=2 modulus=17
//! 5 1
//! 2 1^2
//! 1 0^1 2^1
//! ```
//!
//! One term per line in canonical order; the constant term is `<coeff> 1`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{Monomial, PrimeModulus, SparsePolynomial};
use crate::error::{Error, Result};

pub fn write_polynomial(p: &SparsePolynomial) -> String {
    let mut out = String::new();
    let modulus = p
        .modulus()
        .map_or_else(|| "none".into(), |m| m.value().to_string());
    let _ = writeln!(
        out,
        "poly nvars={} degree={} modulus={}",
        p.nvars(),
        p.degree_bound(),
        modulus
    );
    for (m, c) in p.terms() {
        let _ = write!(out, "{c}");
        if m.is_one() {
            out.push_str(" 1");
        }
        for &(i, e) in m.terms() {
            let _ = write!(out, " {i}^{e}");
        }
        out.push('\n');
    }
    out
}

/// Parses `key=value` fields of a header line whose first word is `tag`.
pub(crate) fn header_fields<'a>(
    line: &'a str,
    tag: &str,
    lineno: usize,
) -> Result<HashMap<&'a str, &'a str>> {
    let mut words = line.split_whitespace();
    if words.next() != Some(tag) {
        return Err(Error::parse(lineno, format!("expected `{tag}` header")));
    }
    words
        .map(|w| {
            w.split_once('=')
                .ok_or_else(|| Error::parse(lineno, format!("expected key=value, got `{w}`")))
        })
        .collect()
}

pub(crate) fn field<T: std::str::FromStr>(
    fields: &HashMap<&str, &str>,
    key: &str,
    lineno: usize,
) -> Result<T> {
    let raw = fields
        .get(key)
        .ok_or_else(|| Error::parse(lineno, format!("missing `{key}=`")))?;
    raw.parse()
        .map_err(|_| Error::parse(lineno, format!("bad value for `{key}`: `{raw}`")))
}

pub(crate) fn parse_modulus(raw: &str, lineno: usize) -> Result<Option<PrimeModulus>> {
    if raw == "none" {
        return Ok(None);
    }
    let p: u64 = raw
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad modulus `{raw}`")))?;
    PrimeModulus::new(p)
        .map(Some)
        .map_err(|_| Error::parse(lineno, format!("modulus {p} is not prime")))
}

/// Non-empty, non-comment lines with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_polynomial(text: &str) -> Result<SparsePolynomial> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let fields = header_fields(header, "poly", hl)?;
    let nvars: usize = field(&fields, "nvars", hl)?;
    let degree: u32 = field(&fields, "degree", hl)?;
    let modulus = parse_modulus(
        fields
            .get("modulus")
            .ok_or_else(|| Error::parse(hl, "missing `modulus=`"))?,
        hl,
    )?;

    let mut terms = Vec::new();
    let mut prev: Option<Monomial> = None;
    for (ln, line) in lines {
        let mut words = line.split_whitespace();
        let coeff: BigInt = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| Error::parse(ln, "expected integer coefficient"))?;
        let mut factors = Vec::new();
        for w in words {
            if w == "1" {
                continue;
            }
            let (v, e) = w
                .split_once('^')
                .ok_or_else(|| Error::parse(ln, format!("expected var^exp, got `{w}`")))?;
            let v = v.strip_prefix('x').unwrap_or(v);
            let v: u32 = v
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad variable `{v}`")))?;
            let e: u32 = e
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad exponent `{e}`")))?;
            if v as usize >= nvars {
                return Err(Error::parse(ln, format!("variable {v} out of range")));
            }
            if e == 0 {
                return Err(Error::parse(ln, "zero exponent"));
            }
            factors.push((v, e));
        }
        let m = Monomial::from_terms(factors);
        if m.degree() > degree {
            return Err(Error::parse(
                ln,
                format!("monomial {m} exceeds degree bound"),
            ));
        }
        if prev.as_ref().is_some_and(|p| *p >= m) {
            return Err(Error::parse(ln, "terms not in canonical order"));
        }
        prev = Some(m.clone());
        terms.push((m, coeff));
    }
    SparsePolynomial::from_terms(nvars, degree, modulus, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_and_reads_back() {
        let text = "poly nvars=3 degree=2 modulus=17\n5 1\n2 1^2\n1 0^1 2^1\n";
        let p = parse_polynomial(text).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(write_polynomial(&p), text);
    }

    #[test]
    fn accepts_prefixed_variables() {
        let p = parse_polynomial("poly nvars=2 degree=1 modulus=none\n3 x1^1\n").unwrap();
        assert_eq!(p.coefficient(&Monomial::var(1)), BigInt::from(3));
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "poly nvars=1 degree=1\n",
            "poly nvars=1 degree=1 modulus=4\n",
            "poly nvars=1 degree=1 modulus=none\n1 3^1\n",
            "poly nvars=2 degree=1 modulus=none\n1 0^2\n",
            "poly nvars=2 degree=1 modulus=none\n1 0^1\n1 1^1\n",
            "poly nvars=2 degree=1 modulus=none\nx 0^1\n",
        ] {
            assert!(
                matches!(parse_polynomial(bad), Err(Error::Parse { .. })),
                "{bad:?}"
            );
        }
    }
}
