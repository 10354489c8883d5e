use std::fmt;

use super::{Edge, Hypergraph, Vertex};
use crate::error::{params, Error, Result};
use crate::templates::sparseness_witness;

/// The fixed hypergraph `H` whose copies drive a saturation process.
#[derive(Clone, PartialEq, Eq)]
pub struct Pattern {
    graph: Hypergraph,
    sparseness: u32,
    sparse_set: Vec<Vertex>,
    sparse_edge: Edge,
}

impl Pattern {
    pub fn new(graph: Hypergraph) -> Result<Pattern> {
        if graph.edge_count() == 0 {
            return Err(Error::EmptyPattern);
        }
        let (set, edge) = sparseness_witness(&graph)?;
        Ok(Pattern { sparseness: set.len() as u32, sparse_set: set, sparse_edge: edge, graph })
    }

    /// Parses the built-in names `K<t>`, `K<t>^<r>`, `edge^<r>` and
    /// `triangle+pendant`.
    pub fn from_shorthand(name: &str) -> Result<Pattern> {
        let bad = || params(format!("unknown pattern shorthand `{name}`"));
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad());
        if name == "triangle+pendant" {
            return Pattern::new(Hypergraph::from_lists(4, 2, [[0, 1], [0, 2], [1, 2], [2, 3]])?);
        }
        if let Some(r) = name.strip_prefix("edge^") {
            let r = num(r)?;
            if r == 0 {
                return Err(bad());
            }
            return Pattern::new(Hypergraph::complete(r, r)?);
        }
        if let Some(rest) = name.strip_prefix('K') {
            let (t, r) = match rest.split_once('^') {
                Some((t, r)) => (num(t)?, num(r)?),
                None => (num(rest)?, 2),
            };
            if t < r || r == 0 {
                return Err(params(format!("K{t}^{r} needs t >= r >= 1")));
            }
            return Pattern::new(Hypergraph::complete(t, r)?);
        }
        Err(bad())
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    /// `|V(H)|`.
    pub fn h(&self) -> u32 {
        self.graph.n()
    }

    pub fn r(&self) -> u32 {
        self.graph.r()
    }

    /// Sparseness `s(H)`.
    pub fn s(&self) -> u32 {
        self.sparseness
    }

    /// The colex-first smallest vertex set lying in exactly one edge.
    pub fn sparse_set(&self) -> &[Vertex] {
        &self.sparse_set
    }

    /// The unique edge containing [`Pattern::sparse_set`].
    pub fn sparse_edge(&self) -> &Edge {
        &self.sparse_edge
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern(h={}, r={}, s={}, {:?})", self.h(), self.r(), self.s(), self.graph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands() {
        let k3 = Pattern::from_shorthand("K3").unwrap();
        assert_eq!((k3.h(), k3.r(), k3.s(), k3.graph().edge_count()), (3, 2, 2, 3));
        let k43 = Pattern::from_shorthand("K4^3").unwrap();
        assert_eq!((k43.h(), k43.r(), k43.s(), k43.graph().edge_count()), (4, 3, 3, 4));
        let e3 = Pattern::from_shorthand("edge^3").unwrap();
        assert_eq!((e3.h(), e3.s(), e3.graph().edge_count()), (3, 1, 1));
        let tp = Pattern::from_shorthand("triangle+pendant").unwrap();
        assert_eq!((tp.h(), tp.s()), (4, 1));
        assert!(Pattern::from_shorthand("K2^3").is_err());
        assert!(Pattern::from_shorthand("petersen").is_err());
    }

    #[test]
    fn empty_pattern_rejected() {
        assert_eq!(Pattern::new(Hypergraph::empty(3, 2).unwrap()), Err(Error::EmptyPattern));
    }
}
