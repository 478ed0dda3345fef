//! Netlist text format.
//!
//! ```text
//! circuit nvars=2 modulus=17
//! g0 = input 0
//! g1 = input 1
//! g2 = mul g0 g1
//! output g2
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{ArithmeticCircuit, Gate};
use crate::algebra::{content_lines, field, header_fields, parse_modulus};
use crate::error::{Error, Result};

pub fn write_netlist(c: &ArithmeticCircuit) -> String {
    let mut out = String::new();
    let modulus = c
        .modulus()
        .map_or_else(|| "none".into(), |p| p.value().to_string());
    let _ = writeln!(out, "circuit nvars={} modulus={modulus}", c.nvars());
    for (i, g) in c.gates().iter().enumerate() {
        let _ = match g {
            Gate::Input(v) => writeln!(out, "g{i} = input {v}"),
            Gate::Const(k) => writeln!(out, "g{i} = const {k}"),
            Gate::Add(a, b) => writeln!(out, "g{i} = add g{a} g{b}"),
            Gate::Mul(a, b) => writeln!(out, "g{i} = mul g{a} g{b}"),
        };
    }
    out.push_str("output");
    for o in c.outputs() {
        let _ = write!(out, " g{o}");
    }
    out.push('\n');
    out
}

fn gate_id(w: &str, line: usize) -> Result<usize> {
    w.strip_prefix('g')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("expected gate id, got `{w}`")))
}

/// Parses a netlist. Gate ids must increase strictly but need not be
/// contiguous; they are renumbered densely.
pub fn parse_netlist(text: &str) -> Result<ArithmeticCircuit> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let fields = header_fields(header, "circuit", hl)?;
    let nvars: usize = field(&fields, "nvars", hl)?;
    let modulus = parse_modulus(
        fields
            .get("modulus")
            .ok_or_else(|| Error::parse(hl, "missing `modulus=`"))?,
        hl,
    )?;

    let mut dense: HashMap<usize, usize> = HashMap::new();
    let mut last_id: Option<usize> = None;
    let mut gates = Vec::new();
    let mut outputs = None;
    for (ln, line) in lines {
        if outputs.is_some() {
            return Err(Error::parse(ln, "content after `output` line"));
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0] == "output" {
            let outs = words[1..]
                .iter()
                .map(|w| {
                    let id = gate_id(w, ln)?;
                    dense
                        .get(&id)
                        .copied()
                        .ok_or_else(|| Error::parse(ln, format!("unknown gate g{id}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if outs.is_empty() {
                return Err(Error::parse(ln, "no outputs listed"));
            }
            outputs = Some(outs);
            continue;
        }
        if words.len() < 3 || words[1] != "=" {
            return Err(Error::parse(ln, "expected `g<i> = <op> ...`"));
        }
        let id = gate_id(words[0], ln)?;
        if last_id.is_some_and(|l| id <= l) {
            return Err(Error::parse(ln, "gate ids must increase strictly"));
        }
        last_id = Some(id);
        let operand = |w: &str| -> Result<usize> {
            let r = gate_id(w, ln)?;
            dense
                .get(&r)
                .copied()
                .ok_or_else(|| Error::parse(ln, format!("g{r} is not an earlier gate")))
        };
        let gate = match (words[2], &words[3..]) {
            ("input", [v]) => {
                let v: u32 = v
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("bad variable `{v}`")))?;
                if v as usize >= nvars {
                    return Err(Error::parse(ln, format!("variable {v} out of range")));
                }
                Gate::Input(v)
            }
            ("const", [k]) => Gate::Const(
                k.parse::<BigInt>()
                    .map_err(|_| Error::parse(ln, format!("bad constant `{k}`")))?,
            ),
            ("add", [a, b]) => Gate::Add(operand(a)?, operand(b)?),
            ("mul", [a, b]) => Gate::Mul(operand(a)?, operand(b)?),
            (op, _) => return Err(Error::parse(ln, format!("bad gate `{op}`"))),
        };
        dense.insert(id, gates.len());
        gates.push(gate);
    }
    let outputs = outputs.ok_or_else(|| Error::parse(0, "missing `output` line"))?;
    ArithmeticCircuit::new(nvars, modulus, gates, outputs).map_err(|e| Error::parse(0, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_writes() {
        let text = "circuit nvars=2 modulus=17\ng0 = input 0\ng1 = input 1\ng2 = mul g0 g1\ng3 = const 20\ng4 = add g2 g3\noutput g4\n";
        let c = parse_netlist(text).unwrap();
        assert_eq!(c.gates()[3], Gate::Const(BigInt::from(3)));
        assert_eq!(parse_netlist(&write_netlist(&c)).unwrap(), c);
    }

    #[test]
    fn sparse_ids_are_renumbered() {
        let c = parse_netlist(
            "circuit nvars=1 modulus=none\ng3 = input 0\ng7 = add g3 g3\noutput g7\n",
        )
        .unwrap();
        assert_eq!(c.gates(), &[Gate::Input(0), Gate::Add(0, 0)]);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "circuit nvars=1 modulus=none\ng0 = add g1 g1\ng1 = input 0\noutput g0\n",
            "circuit nvars=1 modulus=none\ng1 = input 0\ng0 = input 0\noutput g0\n",
            "circuit nvars=1 modulus=none\ng0 = input 3\noutput g0\n",
            "circuit nvars=1 modulus=none\ng0 = input 0\n",
            "circuit nvars=1 modulus=none\ng0 = div g0 g0\noutput g0\n",
        ] {
            assert!(
                matches!(parse_netlist(bad), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }
}
