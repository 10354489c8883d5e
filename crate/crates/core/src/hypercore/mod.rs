//! Uniform hypergraphs on labeled vertices `0..n` and the subset
//! combinatorics shared by every engine in the crate.
//!
//! Edges are strictly increasing vertex sequences. All orderings in the
//! crate are colexicographic: an edge sorts by its largest vertex first,
//! which is also the order of [`EdgeUniverse::rank`].

mod format;
mod pattern;

pub use format::{parse_hypergraph, write_hypergraph};
pub use pattern::Pattern;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use smallvec::SmallVec;

use crate::error::{params, Error, Result};

/// Largest edge universe `C(n, r)` any engine will enumerate unless the
/// caller raises it explicitly.
pub const DEFAULT_UNIVERSE_LIMIT: u64 = 10_000_000;

pub type Vertex = u32;

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Advances `c` to the next `c.len()`-subset of `0..n` in colex order.
/// Returns `false` (leaving `c` untouched) when `c` is the last subset.
pub fn next_colex(c: &mut [Vertex], n: Vertex) -> bool {
    let k = c.len();
    for j in 0..k {
        let limit = if j + 1 < k { c[j + 1] } else { n };
        if c[j] + 1 < limit {
            c[j] += 1;
            for (i, v) in c[..j].iter_mut().enumerate() {
                *v = i as Vertex;
            }
            return true;
        }
    }
    false
}

/// All `k`-subsets of `0..n` in colex order.
pub fn subsets_colex(n: Vertex, k: usize) -> impl Iterator<Item = Vec<Vertex>> {
    let mut current: Option<Vec<Vertex>> = if k as u64 <= n as u64 {
        Some((0..k as Vertex).collect())
    } else {
        None
    };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        current = if next_colex(&mut next, n) { Some(next) } else { None };
        Some(out)
    })
}

/// An r-subset of vertices, stored strictly increasing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Edge(SmallVec<[Vertex; 6]>);

impl Edge {
    /// Builds an edge from any vertex order. Repeated vertices are rejected.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Edge> {
        let mut v: SmallVec<[Vertex; 6]> = vertices.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge(format!("repeated vertex in {:?}", v.as_slice())));
        }
        if v.is_empty() {
            return Err(Error::InvalidEdge("empty edge".into()));
        }
        Ok(Edge(v))
    }

    /// Builds an edge from a sequence that must already be strictly increasing.
    pub fn from_sorted(vertices: &[Vertex]) -> Result<Edge> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidEdge(format!(
                "{vertices:?} is not strictly increasing"
            )));
        }
        Ok(Edge(SmallVec::from_slice(vertices)))
    }

    pub(crate) fn from_sorted_unchecked(vertices: &[Vertex]) -> Edge {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Edge(SmallVec::from_slice(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_superset_of(&self, other: &[Vertex]) -> bool {
        other.iter().all(|v| self.contains(*v))
    }

    /// Number of vertices shared with another sorted vertex list.
    pub fn intersection_size(&self, other: &[Vertex]) -> usize {
        sorted_intersection_size(&self.0, other)
    }

    fn check(&self, n: u32, r: u32) -> Result<()> {
        if self.len() != r as usize {
            return Err(Error::InvalidEdge(format!("{self} has {} vertices, expected {r}", self.len())));
        }
        if let Some(&last) = self.0.last() {
            if last >= n {
                return Err(Error::InvalidEdge(format!("{self} has a vertex outside 0..{n}")));
            }
        }
        Ok(())
    }
}

pub(crate) fn sorted_intersection_size(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Colex ranking of the r-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct EdgeUniverse {
    n: u32,
    r: u32,
    total: u64,
    // binom[v * (r + 1) + k] = C(v, k) for v <= n, k <= r
    binom: Vec<u64>,
}

impl EdgeUniverse {
    pub fn new(n: u32, r: u32) -> Result<EdgeUniverse> {
        Self::with_limit(n, r, DEFAULT_UNIVERSE_LIMIT)
    }

    pub fn with_limit(n: u32, r: u32, limit: u64) -> Result<EdgeUniverse> {
        if r == 0 {
            return Err(params("uniformity r >= 1"));
        }
        let total = binomial(n as u64, r as u64);
        if total > limit {
            return Err(Error::UniverseTooLarge { n, r, size: total as u128, limit });
        }
        let width = r as usize + 1;
        let mut binom = vec![0u64; (n as usize + 1) * width];
        for v in 0..=n as usize {
            for k in 0..width {
                binom[v * width + k] = binomial(v as u64, k as u64);
            }
        }
        Ok(EdgeUniverse { n, r, total, binom })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `C(n, r)`.
    pub fn size(&self) -> u64 {
        self.total
    }

    #[inline]
    fn c(&self, v: u32, k: usize) -> u64 {
        self.binom[v as usize * (self.r as usize + 1) + k]
    }

    /// Rank of a sorted vertex list. The caller guarantees validity.
    #[inline]
    pub fn rank_sorted(&self, vertices: &[Vertex]) -> u64 {
        vertices.iter().enumerate().map(|(i, &v)| self.c(v, i + 1)).sum()
    }

    pub fn rank(&self, e: &Edge) -> Result<u64> {
        e.check(self.n, self.r)?;
        Ok(self.rank_sorted(e.vertices()))
    }

    pub fn unrank(&self, rank: u64) -> Result<Edge> {
        if rank >= self.total {
            return Err(Error::RankOutOfRange { rank, n: self.n, r: self.r, total: self.total });
        }
        let mut out = [0 as Vertex; 64];
        self.unrank_into(rank, &mut out[..self.r as usize]);
        Ok(Edge::from_sorted_unchecked(&out[..self.r as usize]))
    }

    /// Writes the vertices of `rank` into `out` (length r).
    pub fn unrank_into(&self, mut rank: u64, out: &mut [Vertex]) {
        let mut hi = self.n;
        for k in (1..=self.r as usize).rev() {
            // largest v < hi with C(v, k) <= rank
            let mut v = hi - 1;
            while self.c(v, k) > rank {
                v -= 1;
            }
            out[k - 1] = v;
            rank -= self.c(v, k);
            hi = v;
        }
    }

    /// All edges in colex (= rank) order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> {
        subsets_colex(self.n, self.r as usize).map(|v| Edge::from_sorted_unchecked(&v))
    }
}

/// An r-uniform hypergraph on vertices `0..n`. Values are immutable; the
/// `with_*` methods build new graphs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: u32,
    r: u32,
    edges: BTreeSet<Edge>,
}

impl Hypergraph {
    pub fn new(n: u32, r: u32, edges: impl IntoIterator<Item = Edge>) -> Result<Hypergraph> {
        if r == 0 {
            return Err(params("uniformity r >= 1"));
        }
        let mut set = BTreeSet::new();
        for e in edges {
            e.check(n, r)?;
            set.insert(e);
        }
        Ok(Hypergraph { n, r, edges: set })
    }

    /// Convenience constructor from vertex lists in any order.
    pub fn from_lists<I, E>(n: u32, r: u32, lists: I) -> Result<Hypergraph>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = Vertex>,
    {
        let edges = lists.into_iter().map(Edge::new).collect::<Result<Vec<_>>>()?;
        Hypergraph::new(n, r, edges)
    }

    pub fn empty(n: u32, r: u32) -> Result<Hypergraph> {
        Hypergraph::new(n, r, std::iter::empty())
    }

    /// `K_n^r`.
    pub fn complete(n: u32, r: u32) -> Result<Hypergraph> {
        if n < r || r == 0 {
            return Err(params(format!("n >= r >= 1 (got n = {n}, r = {r})")));
        }
        let universe = EdgeUniverse::new(n, r)?;
        Ok(Hypergraph { n, r, edges: universe.edges().collect() })
    }

    pub(crate) fn from_sorted_set(n: u32, r: u32, edges: BTreeSet<Edge>) -> Hypergraph {
        Hypergraph { n, r, edges }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in colex order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &Edge> + DoubleEndedIterator {
        self.edges.iter()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn universe(&self) -> Result<EdgeUniverse> {
        EdgeUniverse::new(self.n, self.r)
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() as u64 == binomial(self.n as u64, self.r as u64)
    }

    /// The graph with `extra` edges added. Re-adding present edges is a no-op.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = Edge>) -> Result<Hypergraph> {
        let mut edges = self.edges.clone();
        for e in extra {
            e.check(self.n, self.r)?;
            edges.insert(e);
        }
        Ok(Hypergraph { n: self.n, r: self.r, edges })
    }

    pub fn without_edge(&self, e: &Edge) -> Hypergraph {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Hypergraph { n: self.n, r: self.r, edges }
    }

    /// The same edges viewed inside a larger vertex set.
    pub fn with_vertex_count(&self, n: u32) -> Result<Hypergraph> {
        Hypergraph::new(n, self.r, self.edges.iter().cloned())
    }

    /// Presence bitset indexed by colex rank.
    pub fn to_bits(&self, universe: &EdgeUniverse) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(universe.size() as usize);
        for e in &self.edges {
            bits.insert(universe.rank_sorted(e.vertices()) as usize);
        }
        bits
    }

    pub fn from_bits(universe: &EdgeUniverse, bits: &FixedBitSet) -> Hypergraph {
        let mut buf = vec![0; universe.r() as usize];
        let edges = bits
            .ones()
            .map(|rank| {
                universe.unrank_into(rank as u64, &mut buf);
                Edge::from_sorted_unchecked(&buf)
            })
            .collect();
        Hypergraph { n: universe.n(), r: universe.r(), edges }
    }

    /// Vertex degrees.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n as usize];
        for e in &self.edges {
            for &v in e.vertices() {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    /// Relabels vertices by `perm` (old index -> new index).
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Hypergraph> {
        if perm.len() != self.n as usize {
            return Err(params("permutation length equals n"));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(e.vertices().iter().map(|&v| perm[v as usize])))
            .collect::<Result<Vec<_>>>()?;
        Hypergraph::new(self.n, self.r, edges)
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, r={}, ", self.n, self.r)?;
        f.debug_set().entries(self.edges.iter()).finish()?;
        write!(f, ")")
    }
}

/// `K_n^r` as a free function.
pub fn complete_graph(n: u32, r: u32) -> Result<Hypergraph> {
    Hypergraph::complete(n, r)
}

/// Edges of `K_n^r` absent from `g`, in colex order.
pub fn missing_edges(g: &Hypergraph) -> Result<Vec<Edge>> {
    let universe = g.universe()?;
    Ok(universe.edges().filter(|e| !g.contains(e)).collect())
}

pub fn edge_rank(e: &Edge, n: u32) -> Result<u64> {
    EdgeUniverse::new(n, e.len() as u32)?.rank(e)
}

pub fn edge_unrank(rank: u64, n: u32, r: u32) -> Result<Edge> {
    EdgeUniverse::new(n, r)?.unrank(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn edge(v: &[u32]) -> Edge {
        Edge::from_sorted(v).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(edge_rank(&edge(&[0, 1]), 4).unwrap(), 0);
        assert_eq!(edge_unrank(5, 4, 2).unwrap(), edge(&[2, 3]));
    }

    #[test]
    fn rank_round_trip_all_triples_of_six() {
        let u = EdgeUniverse::new(6, 3).unwrap();
        assert_eq!(u.size(), 20);
        for i in 0..20 {
            assert_eq!(u.rank(&u.unrank(i).unwrap()).unwrap(), i);
        }
        assert!(u.unrank(20).is_err());
    }

    #[test]
    fn rank_matches_colex_enumeration() {
        for (n, r) in [(7, 1), (7, 3), (9, 4), (6, 6)] {
            let u = EdgeUniverse::new(n, r).unwrap();
            let all: Vec<Edge> = u.edges().collect();
            assert_eq!(all.len() as u64, u.size());
            for (i, e) in all.iter().enumerate() {
                assert_eq!(u.rank(e).unwrap(), i as u64);
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rank_rejects_malformed() {
        let u = EdgeUniverse::new(4, 2).unwrap();
        assert!(u.rank(&edge(&[0, 4])).is_err());
        assert!(u.rank(&edge(&[0, 1, 2])).is_err());
        assert!(Edge::from_sorted(&[2, 1]).is_err());
        assert!(Edge::new([1, 1]).is_err());
    }

    #[test]
    fn complete_graph_sizes() {
        assert_eq!(complete_graph(4, 2).unwrap().edge_count(), 6);
        assert_eq!(complete_graph(5, 3).unwrap().edge_count(), 10);
        assert_eq!(complete_graph(7, 4).unwrap().edge_count(), 35);
        assert!(complete_graph(2, 3).is_err());
    }

    #[test]
    fn missing_edge_examples() {
        assert!(missing_edges(&complete_graph(4, 2).unwrap()).unwrap().is_empty());
        let path = Hypergraph::from_lists(3, 2, [[0, 1], [1, 2]]).unwrap();
        assert_eq!(missing_edges(&path).unwrap(), vec![edge(&[0, 2])]);
        let empty = Hypergraph::empty(6, 3).unwrap();
        assert_eq!(missing_edges(&empty).unwrap().len(), 20);
    }

    #[test]
    fn universe_limit_enforced() {
        assert!(matches!(
            EdgeUniverse::with_limit(30, 5, 1000),
            Err(Error::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn next_colex_walks_pairs() {
        let got: Vec<Vec<u32>> = subsets_colex(4, 2).collect();
        assert_eq!(got, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets_colex(3, 0).count(), 1);
        assert_eq!(subsets_colex(2, 3).count(), 0);
    }

    proptest! {
        #[test]
        fn missing_plus_present_is_binomial(n in 3u32..8, r in 1u32..4, mask in any::<u64>()) {
            prop_assume!(r <= n);
            let u = EdgeUniverse::new(n, r).unwrap();
            let edges: Vec<Edge> = u.edges().enumerate()
                .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
                .map(|(_, e)| e)
                .collect();
            let g = Hypergraph::new(n, r, edges).unwrap();
            let missing = missing_edges(&g).unwrap();
            prop_assert_eq!(missing.len() + g.edge_count(), u.size() as usize);
            prop_assert!(missing.iter().all(|e| !g.contains(e)));
        }

        #[test]
        fn edge_sets_ignore_order_and_duplicates(
            lists in proptest::collection::vec(proptest::sample::subsequence((0u32..7).collect::<Vec<_>>(), 3), 0..12)
        ) {
            let a = Hypergraph::from_lists(7, 3, lists.clone()).unwrap();
            let mut doubled = lists.clone();
            doubled.extend(lists.iter().rev().cloned());
            let b = Hypergraph::from_lists(7, 3, doubled).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn rank_unrank_round_trip(n in 1u32..40, r in 1u32..6, seed in any::<u64>()) {
            prop_assume!(r <= n);
            let u = EdgeUniverse::new(n, r).unwrap();
            let i = seed % u.size();
            prop_assert_eq!(u.rank(&u.unrank(i).unwrap()).unwrap(), i);
        }
    }
}
