//! Exact `wsat(n, H)` by exhaustion on tiny instances, engine-verified
//! upper bounds, and normalised ratio tables.
//!
//! The exact search walks edge counts `m = 0, 1, ...` and, for each `m`, the
//! `m`-subsets of the edge universe in colex order. With at most 30 edges in
//! the universe a subset is a `u32` mask, and colex order on equal-size sets
//! is numeric order on masks. Isomorphism pruning keeps only masks that are
//! the minimum of their orbit under vertex permutations; the first
//! percolating mask in full enumeration is always such a minimum, so pruning
//! changes neither the value nor the witness.

use std::fmt;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rayon::prelude::*;

use crate::constructions::{clique_extremal, padded_example, s1_construction};
use crate::error::{params, Error, Result};
use crate::hypercore::{binomial, EdgeUniverse, Hypergraph, Pattern, Vertex};
use crate::percolation::{closure, saturates, PatternMatcher, SaturationCertificate};

/// Largest edge universe the exact solver accepts.
pub const MAX_EXACT_EDGES: u64 = 30;
pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Isomorphism pruning is only used up to this many vertices.
pub const MAX_PRUNING_VERTICES: u32 = 7;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Maximum number of percolation checks.
    pub budget: u64,
    pub iso_pruning: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { budget: DEFAULT_BUDGET, iso_pruning: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WsatResult {
    pub value: u64,
    /// The colex-least percolating graph with `value` edges.
    pub witness: Hypergraph,
    pub certificate: SaturationCertificate,
    /// Percolation checks performed.
    pub explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WsatOutcome {
    Exact(WsatResult),
    /// The budget ran out while scanning graphs with `lower_bound` edges;
    /// every graph with fewer edges was ruled out.
    Inconclusive { lower_bound: u64, explored: u64 },
}

impl WsatOutcome {
    pub fn exact(&self) -> Option<&WsatResult> {
        match self {
            WsatOutcome::Exact(r) => Some(r),
            WsatOutcome::Inconclusive { .. } => None,
        }
    }

    pub fn explored(&self) -> u64 {
        match self {
            WsatOutcome::Exact(r) => r.explored,
            WsatOutcome::Inconclusive { explored, .. } => *explored,
        }
    }
}

impl fmt::Display for WsatOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WsatOutcome::Exact(r) => write!(f, "{} exact", r.value),
            WsatOutcome::Inconclusive { lower_bound, .. } => write!(f, "inconclusive above m = {lower_bound}"),
        }
    }
}

/// Images of every edge rank under every vertex permutation.
struct RankPermutations {
    tables: Vec<Vec<u8>>,
}

impl RankPermutations {
    fn new(universe: &EdgeUniverse) -> RankPermutations {
        let n = universe.n();
        let r = universe.r() as usize;
        let edges: Vec<Vec<Vertex>> = universe.edges().map(|e| e.vertices().to_vec()).collect();
        let tables = (0..n)
            .permutations(n as usize)
            .skip(1) // identity
            .map(|perm| {
                let mut img = vec![0; r];
                edges
                    .iter()
                    .map(|e| {
                        for (slot, &v) in img.iter_mut().zip(e) {
                            *slot = perm[v as usize];
                        }
                        img.sort_unstable();
                        universe.rank_sorted(&img) as u8
                    })
                    .collect()
            })
            .collect();
        RankPermutations { tables }
    }

    fn is_orbit_minimum(&self, mask: u32) -> bool {
        self.tables.iter().all(|t| {
            let mut image = 0u32;
            let mut rest = mask;
            while rest != 0 {
                image |= 1 << t[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            image >= mask
        })
    }
}

/// Next mask with the same popcount (Gosper's hack), or `None` past `limit`.
fn next_mask(mask: u32, limit: u32) -> Option<u32> {
    if mask == 0 {
        return None;
    }
    let c = mask & mask.wrapping_neg();
    let r = mask as u64 + c as u64;
    let next = ((((r as u32) ^ mask) >> 2) / c) | r as u32;
    (r < 1u64 << limit).then_some(next)
}

fn mask_graph(universe: &EdgeUniverse, mask: u32) -> Result<Hypergraph> {
    let mut bits = FixedBitSet::with_capacity(universe.size() as usize);
    if mask != 0 {
        bits.as_mut_slice()[0] = mask as usize;
    }
    Ok(Hypergraph::from_bits(universe, &bits))
}

/// The minimum number of edges of a weakly `H`-saturated `r`-graph on `n`
/// vertices, by exhaustion.
pub fn wsat_exact(n: u32, h: &Pattern, options: &SolverOptions) -> Result<WsatOutcome> {
    let r = h.r();
    let size = binomial(n as u64, r as u64);
    if size > MAX_EXACT_EDGES {
        return Err(params(format!("C(n, r) <= {MAX_EXACT_EDGES} (got C({n}, {r}) = {size})")));
    }
    let universe = EdgeUniverse::new(n, r)?;
    let u = size as u32;
    let matcher = PatternMatcher::new(h);
    let pruning = (options.iso_pruning && n <= MAX_PRUNING_VERTICES).then(|| RankPermutations::new(&universe));
    let evaluate = |mask: u32| -> Option<bool> {
        if let Some(p) = &pruning {
            if !p.is_orbit_minimum(mask) {
                return None;
            }
        }
        let mut bits = FixedBitSet::with_capacity(u as usize);
        if u > 0 {
            bits.as_mut_slice()[0] = mask as usize;
        }
        Some(saturates(&universe, bits, &matcher))
    };

    let mut explored = 0u64;
    for m in 0..=u {
        let mut next = Some(if m == 0 { 0 } else { ((1u64 << m) - 1) as u32 });
        while let Some(start) = next {
            let mut chunk = Vec::with_capacity(CHUNK);
            let mut cur = Some(start);
            while let Some(mask) = cur {
                if chunk.len() == CHUNK {
                    break;
                }
                chunk.push(mask);
                cur = next_mask(mask, u);
            }
            next = cur;
            let verdicts: Vec<Option<bool>> = chunk.par_iter().map(|&mask| evaluate(mask)).collect();
            for (&mask, verdict) in chunk.iter().zip(verdicts) {
                let Some(percolates) = verdict else { continue };
                if explored == options.budget {
                    return Ok(WsatOutcome::Inconclusive { lower_bound: m as u64, explored });
                }
                explored += 1;
                if percolates {
                    let witness = mask_graph(&universe, mask)?;
                    let run = closure(&witness, h)?;
                    if !run.percolated {
                        return Err(Error::Invariant("exhaustive witness fails to percolate on replay".into()));
                    }
                    return Ok(WsatOutcome::Exact(WsatResult {
                        value: m as u64,
                        witness,
                        certificate: run.certificate,
                        explored,
                    }));
                }
            }
        }
    }
    Err(Error::Invariant("the complete graph failed to percolate".into()))
}

/// An engine-verified upper bound on `wsat(n, H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    pub value: u64,
    pub witness: Hypergraph,
    /// Which generator produced the witness, e.g. `clique-extremal+prune`.
    pub source: String,
}

/// Drops edges one at a time in colex order whenever the rest still
/// percolates. The result is inclusion-minimal.
fn prune(g: &Hypergraph, h: &Pattern) -> Result<Hypergraph> {
    let universe = g.universe()?;
    let matcher = PatternMatcher::new(h);
    let mut bits = g.to_bits(&universe);
    for e in g.edges() {
        let rank = universe.rank(e)? as usize;
        bits.set(rank, false);
        if !saturates(&universe, bits.clone(), &matcher) {
            bits.insert(rank);
        }
    }
    Ok(Hypergraph::from_bits(&universe, &bits))
}

/// Best of the complete graph, the clique construction, the `s = 1`
/// construction and padded clique constructions, each followed by greedy
/// edge deletion. Every candidate is checked by the closure engine.
pub fn wsat_upper(n: u32, h: &Pattern) -> Result<UpperBound> {
    let (r, hv) = (h.r(), h.h());
    if n < hv {
        return Err(params(format!("n >= h (got n = {n}, h = {hv})")));
    }
    let mut candidates: Vec<(String, Hypergraph)> = vec![("complete".into(), Hypergraph::complete(n, r)?)];
    if hv >= r {
        candidates.push(("clique-extremal".into(), clique_extremal(n, hv, r)?));
        for k1 in hv..n {
            let base = clique_extremal(k1, hv, r)?;
            if let Ok(c) = padded_example(&base, n - k1, h) {
                candidates.push((format!("padded({k1})"), c.graph));
            }
        }
    }
    if h.s() == 1 {
        candidates.push(("s1".into(), s1_construction(h, n)?));
    }

    let mut best: Option<UpperBound> = None;
    for (name, g) in candidates {
        if !closure(&g, h)?.percolated {
            continue;
        }
        let pruned = prune(&g, h)?;
        let (value, witness, source) = if pruned.edge_count() < g.edge_count() {
            (pruned.edge_count() as u64, pruned, format!("{name}+prune"))
        } else {
            (g.edge_count() as u64, g, name)
        };
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(UpperBound { value, witness, source });
        }
    }
    best.ok_or_else(|| Error::Invariant("the complete graph failed to percolate".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Upper,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Upper => "upper",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub n: u32,
    pub value: u64,
    pub method: Method,
    /// `value / n^(s-1)`.
    pub ratio: f64,
}

/// `wsat(n, H) / n^(s-1)` for each `n`, exact where the solver finishes
/// within budget and an upper bound otherwise.
pub fn ratio_table(h: &Pattern, sizes: &[u32], options: &SolverOptions) -> Result<Vec<RatioRow>> {
    sizes
        .iter()
        .map(|&n| {
            let exact = if binomial(n as u64, h.r() as u64) <= MAX_EXACT_EDGES {
                wsat_exact(n, h, options)?.exact().map(|r| r.value)
            } else {
                None
            };
            let (value, method) = match exact {
                Some(v) => (v, Method::Exact),
                None => (wsat_upper(n, h)?.value, Method::Upper),
            };
            let ratio = value as f64 / (n as f64).powi(h.s() as i32 - 1);
            Ok(RatioRow { n, value, method, ratio })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::{clique_wsat_value, is_weakly_saturated, verify_certificate};

    fn pat(name: &str) -> Pattern {
        Pattern::from_shorthand(name).unwrap()
    }

    fn exact(n: u32, name: &str) -> WsatResult {
        wsat_exact(n, &pat(name), &SolverOptions::default()).unwrap().exact().unwrap().clone()
    }

    #[test]
    fn gosper_walks_colex() {
        let mut masks = vec![0b0111u32];
        while let Some(m) = next_mask(*masks.last().unwrap(), 5) {
            masks.push(m);
        }
        assert_eq!(masks.len(), 10);
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*masks.last().unwrap(), 0b11100);
        assert_eq!(next_mask((1 << 30) - 1, 30), None);
    }

    #[test]
    fn spec_examples() {
        assert_eq!(exact(4, "K3").value, 3);
        assert_eq!(exact(5, "K3").value, 4);
        assert_eq!(exact(5, "K4^3").value, 6);
        assert_eq!(exact(5, "edge^2").value, 0);
    }

    #[test]
    fn witness_is_valid() {
        let p = pat("K4");
        let res = exact(5, "K4");
        assert_eq!(res.witness.edge_count() as u64, res.value);
        assert!(is_weakly_saturated(&res.witness, &p).unwrap());
        assert!(verify_certificate(&res.witness, &p, &res.certificate).unwrap().complete);
    }

    #[test]
    fn below_h_needs_everything() {
        assert_eq!(exact(3, "K4").value, 3);
    }

    #[test]
    fn pruning_does_not_change_answer() {
        for (n, name) in [(5, "K3"), (5, "K4"), (5, "triangle+pendant"), (5, "K4^3"), (4, "K3")] {
            let on = wsat_exact(n, &pat(name), &SolverOptions::default()).unwrap();
            let off = wsat_exact(n, &pat(name), &SolverOptions { iso_pruning: false, ..Default::default() }).unwrap();
            let (on, off) = (on.exact().unwrap(), off.exact().unwrap());
            assert_eq!(on.value, off.value, "{name} on {n}");
            assert_eq!(on.witness, off.witness, "{name} on {n}");
            assert!(on.explored <= off.explored);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let out = wsat_exact(5, &pat("K3"), &SolverOptions { budget: 3, iso_pruning: false }).unwrap();
        assert_eq!(out, WsatOutcome::Inconclusive { lower_bound: 1, explored: 3 });
        assert_eq!(out.to_string(), "inconclusive above m = 1");
    }

    #[test]
    fn too_large_is_rejected() {
        assert!(wsat_exact(9, &pat("K3"), &SolverOptions::default()).is_err());
    }

    #[test]
    fn upper_examples() {
        let tp = wsat_upper(6, &pat("triangle+pendant")).unwrap();
        assert_eq!(tp.value, 3);
        assert_eq!(wsat_upper(6, &pat("K3")).unwrap().value, 5);
        assert_eq!(wsat_upper(4, &pat("K4")).unwrap().value, 5);
        assert!(wsat_upper(3, &pat("K4")).is_err());
    }

    #[test]
    fn exact_never_exceeds_upper() {
        for (n, name) in [(4, "K3"), (6, "K3"), (5, "K4"), (5, "triangle+pendant"), (5, "K4^3"), (6, "K4^3")] {
            let e = exact(n, name).value;
            let u = wsat_upper(n, &pat(name)).unwrap().value;
            assert!(e <= u, "{name} on {n}: {e} > {u}");
        }
    }

    #[test]
    fn clique_values_small() {
        for (n, t, r) in [(4, 3, 2), (5, 4, 2), (4, 4, 3), (6, 4, 3)] {
            let name = format!("K{t}^{r}");
            assert_eq!(exact(n, &name).value, clique_wsat_value(n, t, r).unwrap(), "{name} on {n}");
        }
    }

    #[test]
    fn triangle_ratios() {
        let rows = ratio_table(&pat("K3"), &[3, 4, 5, 6], &SolverOptions::default()).unwrap();
        let values: Vec<u64> = rows.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![2, 3, 4, 5]);
        assert!(rows.iter().all(|r| r.method == Method::Exact));
        assert!((rows[0].ratio - 2.0 / 3.0).abs() < 1e-12);
        let single = ratio_table(&pat("edge^2"), &[3, 4, 12], &SolverOptions::default()).unwrap();
        assert!(single.iter().all(|r| r.ratio == 0.0));
        assert_eq!(single[2].method, Method::Upper);
    }
}
