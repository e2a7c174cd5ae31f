use std::fmt::Write as _;

use super::{PureComplex, Simplex};
use crate::error::{Error, Result};

/// Writes `d n`, then one facet per line in colex order.
pub fn write_complex(x: &PureComplex, n: usize) -> String {
    let mut out = format!("{} {}\n", x.dim(), n);
    for f in x.facets() {
        let line: Vec<String> = f.vertices().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Parses the complex text format. Blank lines and lines starting with `#` are ignored.
/// The returned complex carries the full (d−1)-skeleton on {1..=n}.
pub fn parse_complex(text: &str) -> Result<(PureComplex, usize)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `d n` header".into(),
    })?;
    let h = numbers(header, hl)?;
    let [d, n] = h[..] else {
        return Err(Error::Parse {
            line: hl,
            msg: "header must be `d n`".into(),
        });
    };
    let (d, n) = (d as usize, n as usize);
    if d < 1 || n <= d {
        return Err(Error::Parse {
            line: hl,
            msg: format!("need n > d >= 1, got d = {d}, n = {n}"),
        });
    }
    let mut facets = Vec::new();
    for (ln, line) in lines {
        let vs = numbers(line, ln)?;
        let bad = |msg: String| Error::Parse { line: ln, msg };
        if vs.len() != d + 1 {
            return Err(bad(format!("facet needs {} vertices", d + 1)));
        }
        if vs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("facet vertices must be strictly increasing".into()));
        }
        if vs.iter().any(|&v| v == 0 || v as usize > n) {
            return Err(bad(format!("vertex outside 1..={n}")));
        }
        facets.push(Simplex::from_sorted_unchecked(vs));
    }
    let x = PureComplex::new(d, facets)?.with_skeleton(n)?;
    Ok((x, n))
}

fn numbers(line: &str, ln: usize) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u32>().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("bad integer {t:?}"),
            })
        })
        .collect()
}
