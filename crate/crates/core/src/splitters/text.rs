//! Splitter file format: a `splitter n= k= range= kind= count=` header,
//! then one line of `n` colors per member.

use std::fmt::Write as _;

use super::{SplitKind, SplitterFamily};
use crate::algebra::{content_lines, field, header_fields};
use crate::error::{Error, Result};

pub fn write_splitter(h: &SplitterFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "splitter n={} k={} range={} kind={} count={}",
        h.n(),
        h.k(),
        h.range(),
        h.kind().tag(),
        h.len()
    );
    for m in h.members() {
        let row: Vec<String> = m.iter().map(u32::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_splitter(text: &str) -> Result<SplitterFamily> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let fields = header_fields(header, "splitter", hl)?;
    let n: usize = field(&fields, "n", hl)?;
    let k: usize = field(&fields, "k", hl)?;
    let range: usize = field(&fields, "range", hl)?;
    let count: usize = field(&fields, "count", hl)?;
    let kind: SplitKind = field::<String>(&fields, "kind", hl)?
        .parse()
        .map_err(|e| Error::parse(hl, e))?;
    let mut members = Vec::with_capacity(count);
    for (ln, line) in lines {
        let row = line
            .split_whitespace()
            .map(|w| {
                w.parse::<u32>()
                    .map_err(|_| Error::parse(ln, format!("bad color `{w}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::parse(
                ln,
                format!("expected {n} colors, got {}", row.len()),
            ));
        }
        if row.iter().any(|&c| c as usize >= range) {
            return Err(Error::parse(ln, "color out of range"));
        }
        members.push(row);
    }
    if members.len() != count {
        return Err(Error::parse(
            0,
            format!("header says {count} members, found {}", members.len()),
        ));
    }
    SplitterFamily::new(n, k, range, kind, members).map_err(|e| Error::parse(0, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_back() {
        let h = SplitterFamily::new(
            3,
            2,
            3,
            SplitKind::Injective,
            vec![vec![0, 1, 2], vec![2, 2, 0]],
        )
        .unwrap();
        let text = write_splitter(&h);
        assert!(text.starts_with("splitter n=3 k=2 range=3 kind=injective count=2\n"));
        assert_eq!(parse_splitter(&text).unwrap(), h);
        assert!(parse_splitter("splitter n=3 k=2 range=2 kind=even count=1\n0 1 2\n").is_err());
    }
}
