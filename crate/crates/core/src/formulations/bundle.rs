//! Text forms of the formulation bundle: `meta.txt`, `legend.txt` and
//! assignment files.
//!
//! ```text
//! problem=ham-path n=4 theta=2 delta=2 s=36
//! ```
//!
//! Assignments are `assign s=<s>` followed by `s` space-separated bits.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{FormulationOutput, Legend, Params, Problem};
use crate::algebra::{content_lines, field, header_fields};
use crate::error::{Error, Result};

/// Contents of `meta.txt`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meta {
    pub problem: Problem,
    pub params: Params,
    pub delta: u32,
    pub s: usize,
}

impl From<&FormulationOutput> for Meta {
    fn from(out: &FormulationOutput) -> Self {
        Self {
            problem: out.problem(),
            params: out.layout.params().clone(),
            delta: out.delta(),
            s: out.s(),
        }
    }
}

pub fn write_meta(meta: &Meta) -> String {
    let mut line = format!("problem={}", meta.problem);
    for (name, value) in meta.params.pairs() {
        let _ = write!(line, " {name}={value}");
    }
    let _ = writeln!(line, " delta={} s={}", meta.delta, meta.s);
    line
}

pub fn parse_meta(text: &str) -> Result<Meta> {
    let (ln, line) = content_lines(text)
        .next()
        .ok_or_else(|| Error::parse(1, "empty meta file"))?;
    let mut fields = HashMap::new();
    for word in line.split_whitespace() {
        let (k, v) = word
            .split_once('=')
            .ok_or_else(|| Error::parse(ln, format!("expected key=value, got `{word}`")))?;
        if fields.insert(k, v).is_some() {
            return Err(Error::parse(ln, format!("repeated field `{k}`")));
        }
    }
    let problem: Problem = fields
        .get("problem")
        .ok_or_else(|| Error::parse(ln, "missing `problem=`"))?
        .parse()?;
    let mut params = Params::default();
    for (&k, v) in &fields {
        if matches!(k, "problem" | "delta" | "s") {
            continue;
        }
        let value = v
            .parse()
            .map_err(|_| Error::parse(ln, format!("bad value for `{k}`: `{v}`")))?;
        params.set(k, value).map_err(|e| Error::parse(ln, e))?;
    }
    Ok(Meta {
        problem,
        params,
        delta: field(&fields, "delta", ln)?,
        s: field(&fields, "s", ln)?,
    })
}

/// One line per variable: `<index> <problem-tag> <key fields>`.
pub fn write_legend(problem: Problem, legend: &Legend) -> String {
    let mut out = String::new();
    for (i, key) in legend.keys().iter().enumerate() {
        let _ = writeln!(out, "{i} {problem} {key}");
    }
    out
}

pub fn write_assignment(values: &[bool]) -> String {
    let bits: Vec<&str> = values.iter().map(|&b| if b { "1" } else { "0" }).collect();
    format!("assign s={}\n{}\n", values.len(), bits.join(" "))
}

pub fn parse_assignment(text: &str) -> Result<Vec<bool>> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty assignment"))?;
    let s: usize = field(&header_fields(header, "assign", hl)?, "s", hl)?;
    let mut values = Vec::with_capacity(s);
    for (ln, line) in lines {
        for w in line.split_whitespace() {
            values.push(match w {
                "0" => false,
                "1" => true,
                _ => return Err(Error::parse(ln, format!("expected a bit, got `{w}`"))),
            });
        }
    }
    if values.len() != s {
        return Err(Error::parse(
            hl,
            format!("header says s={s}, found {} bits", values.len()),
        ));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meta_round_trip() {
        let meta = Meta {
            problem: Problem::MaxKSat,
            params: Params::new(5, 2)
                .with("k", 2)
                .unwrap()
                .with("t", 3)
                .unwrap(),
            delta: 1,
            s: 42,
        };
        let text = write_meta(&meta);
        assert_eq!(text, "problem=max-ksat n=5 k=2 t=3 theta=2 delta=1 s=42\n");
        assert_eq!(parse_meta(&text).unwrap(), meta);
        assert!(parse_meta("problem=nope n=3 theta=2 delta=1 s=1").is_err());
        assert!(parse_meta("problem=ham-path n=3 n=4 theta=2 delta=1 s=1").is_err());
    }

    #[test]
    fn assignment_round_trip_and_length_check() {
        let bits = vec![true, false, true];
        let text = write_assignment(&bits);
        assert_eq!(text, "assign s=3\n1 0 1\n");
        assert_eq!(parse_assignment(&text).unwrap(), bits);
        assert!(parse_assignment("assign s=2\n1\n").is_err());
        assert!(parse_assignment("assign s=1\n2\n").is_err());
        assert_eq!(
            parse_assignment("assign s=0\n").unwrap(),
            Vec::<bool>::new()
        );
    }
}
