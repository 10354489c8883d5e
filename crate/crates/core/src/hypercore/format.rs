//! Line-based text format: a header `n r`, then one edge per line as
//! increasing vertex indices. Lines starting with `#` are comments.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{Edge, Hypergraph, Vertex};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub(crate) fn parse_numbers(line_no: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| parse_err(line_no, format!("expected a non-negative integer, found `{tok}`")))
        })
        .collect()
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut header: Option<(u32, u32)> = None;
    let mut edges = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums = parse_numbers(line_no, line)?;
        match header {
            None => {
                let [n, r] = nums[..] else {
                    return Err(parse_err(line_no, "header must be `n r`"));
                };
                if r == 0 || n > u32::MAX as u64 || r > u32::MAX as u64 {
                    return Err(parse_err(line_no, "header needs r >= 1 and n, r within range"));
                }
                header = Some((n as u32, r as u32));
            }
            Some((n, r)) => {
                if nums.len() != r as usize {
                    return Err(parse_err(line_no, format!("edge has {} vertices, expected {r}", nums.len())));
                }
                if nums.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(parse_err(line_no, "edge vertices must be strictly increasing"));
                }
                if nums.iter().any(|&v| v >= n as u64) {
                    return Err(parse_err(line_no, format!("vertex out of range 0..{n}")));
                }
                let verts: Vec<Vertex> = nums.iter().map(|&v| v as Vertex).collect();
                let e = Edge::from_sorted_unchecked(&verts);
                if !edges.insert(e) {
                    return Err(parse_err(line_no, "duplicate edge"));
                }
            }
        }
    }
    let (n, r) = header.ok_or_else(|| parse_err(0, "missing `n r` header"))?;
    Ok(Hypergraph::from_sorted_set(n, r, edges))
}

/// Canonical serialization: header, then edges in colex order.
pub fn write_hypergraph(g: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.r()).unwrap();
    for e in g.edges() {
        writeln!(out, "{e}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_with_comments() {
        let g = parse_hypergraph("# a path\n3 2\n0 1\n\n# middle\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(write_hypergraph(&g), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = parse_hypergraph("4 2\n0 1\n2 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_hypergraph("4 2\n0 9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_hypergraph("4 2\n0 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_hypergraph("4 2\n0 1\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(parse_hypergraph("# nothing\n").is_err());
        assert!(parse_hypergraph("4 x\n").is_err());
    }

    proptest! {
        #[test]
        fn canonical_text_round_trips(n in 3u32..9, r in 1u32..4, mask in any::<u64>()) {
            prop_assume!(r <= n);
            let all: Vec<Edge> = super::super::EdgeUniverse::new(n, r).unwrap().edges().collect();
            let g = Hypergraph::new(n, r, all.into_iter().enumerate()
                .filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, e)| e)).unwrap();
            let text = write_hypergraph(&g);
            let back = parse_hypergraph(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(write_hypergraph(&back), text);
        }
    }
}
