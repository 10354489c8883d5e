//! The H-bootstrap engine.
//!
//! [`closure`] runs the process in rounds. Each round tests every candidate
//! edge against a frozen snapshot of the current graph, then applies all
//! addable edges in colex order with the witnesses found against that
//! snapshot. Witnesses stay valid because the graph only grows. After the
//! first round, only edges sharing at least `2r - h` vertices with an edge
//! added in the previous round are re-tested: any new copy through `e` must
//! use a newly added edge, and a copy spans at most `h` vertices.
//!
//! Candidate tests inside a round run on the rayon pool; results are
//! collected in candidate order, so the output does not depend on the
//! thread count.

mod certificate;
mod matcher;
mod verify;

pub use certificate::{CertificateKind, Embedding, SaturationCertificate, Step, TemplateCopy, Witness};
pub use verify::{verify_certificate, verify_template_certificate, InvalidStep, Replay};

pub(crate) use matcher::{Host, Oracle, PatternMatcher};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{params, Error, Result};
use crate::hypercore::{binomial, sorted_intersection_size, Edge, EdgeUniverse, Hypergraph, Pattern, Vertex};

const PARALLEL_MIN_CANDIDATES: usize = 64;

/// Outcome of a saturation process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub closure: Hypergraph,
    pub certificate: SaturationCertificate,
    pub percolated: bool,
}

fn check_uniformity(g: &Hypergraph, h: &Pattern) -> Result<()> {
    if g.r() != h.r() {
        return Err(Error::UniformityMismatch { host: g.r(), pattern: h.r() });
    }
    Ok(())
}

/// Returns a witness iff `g + e` contains a copy of `h` whose image uses `e`.
pub fn creates_new_copy(g: &Hypergraph, h: &Pattern, e: &Edge) -> Result<Option<Embedding>> {
    check_uniformity(g, h)?;
    if h.h() > g.n() {
        return Err(params(format!("pattern on {} vertices does not fit in {} vertices", h.h(), g.n())));
    }
    let universe = g.universe()?;
    universe.rank(e)?;
    if g.contains(e) {
        return Err(Error::EdgePresent(format!("{e:?}")));
    }
    let bits = g.to_bits(&universe);
    let host = Host { universe: &universe, bits: &bits };
    Ok(PatternMatcher::new(h).find_embedding(&host, e.vertices()).map(|mapping| Embedding {
        mapping,
        covered_edge: e.clone(),
    }))
}

/// The H-bootstrap closure of `g`, with a certificate for one valid
/// ordering of the added edges.
pub fn closure(g: &Hypergraph, h: &Pattern) -> Result<ClosureResult> {
    check_uniformity(g, h)?;
    run_rounds(g, &PatternMatcher::new(h))
}

/// Same closure, computed by repeated sweeps over `order` (a permutation of
/// the colex ranks of `g`'s universe), adding each edge as soon as it
/// becomes addable.
pub fn closure_in_order(g: &Hypergraph, h: &Pattern, order: &[u64]) -> Result<ClosureResult> {
    check_uniformity(g, h)?;
    run_sweeps(g, &PatternMatcher::new(h), order)
}

pub fn is_weakly_saturated(g: &Hypergraph, h: &Pattern) -> Result<bool> {
    Ok(closure(g, h)?.percolated)
}

/// `C(n, r) - C(n - t + r, r)`: the weak saturation number of `K_t^r`.
pub fn clique_wsat_value(n: u32, t: u32, r: u32) -> Result<u64> {
    if !(n >= t && t >= r && r >= 1) {
        return Err(params(format!("n >= t >= r >= 1 (got n = {n}, t = {t}, r = {r})")));
    }
    let (n, t, r) = (n as u64, t as u64, r as u64);
    Ok(binomial(n, r) - binomial(n - t + r, r))
}

fn finish(
    universe: &EdgeUniverse,
    bits: &FixedBitSet,
    kind: CertificateKind,
    steps: Vec<Step>,
) -> ClosureResult {
    let closure = Hypergraph::from_bits(universe, bits);
    let percolated = closure.edge_count() as u64 == universe.size();
    ClosureResult {
        closure,
        certificate: SaturationCertificate { kind, n: universe.n(), r: universe.r(), steps },
        percolated,
    }
}

pub(crate) fn run_rounds(g: &Hypergraph, oracle: &dyn Oracle) -> Result<ClosureResult> {
    let universe = g.universe()?;
    let r = universe.r() as usize;
    let mut bits = g.to_bits(&universe);
    let mut missing: Vec<u64> = (0..universe.size()).filter(|&i| !bits.contains(i as usize)).collect();
    let mut candidates = missing.clone();
    let mut steps = Vec::new();
    let min_shared = (2 * r).saturating_sub(oracle.reach());

    while !candidates.is_empty() {
        let test = |&rank: &u64| {
            let mut verts = [0 as Vertex; 64];
            universe.unrank_into(rank, &mut verts[..r]);
            let host = Host { universe: &universe, bits: &bits };
            oracle.find(&host, &verts[..r]).map(|w| (rank, Edge::from_sorted_unchecked(&verts[..r]), w))
        };
        let found: Vec<_> = if candidates.len() >= PARALLEL_MIN_CANDIDATES {
            candidates.par_iter().with_min_len(8).filter_map(test).collect()
        } else {
            candidates.iter().filter_map(test).collect()
        };
        if found.is_empty() {
            break;
        }
        let mut added: Vec<Edge> = Vec::with_capacity(found.len());
        for (rank, edge, witness) in found {
            bits.insert(rank as usize);
            added.push(edge.clone());
            steps.push(Step { edge, phase_key: 0, witness });
        }
        missing.retain(|&i| !bits.contains(i as usize));
        candidates = if min_shared == 0 {
            missing.clone()
        } else {
            let mut verts = vec![0 as Vertex; r];
            missing
                .iter()
                .copied()
                .filter(|&rank| {
                    universe.unrank_into(rank, &mut verts);
                    added.iter().any(|a| sorted_intersection_size(a.vertices(), &verts) >= min_shared)
                })
                .collect()
        };
    }
    Ok(finish(&universe, &bits, oracle.kind(), steps))
}

/// Percolation verdict only: sweeps the missing edges until nothing
/// changes. Used by the exhaustive solver, which needs no certificate.
pub(crate) fn saturates(universe: &EdgeUniverse, mut bits: FixedBitSet, oracle: &dyn Oracle) -> bool {
    let r = universe.r() as usize;
    let mut missing: Vec<u64> = (0..universe.size()).filter(|&i| !bits.contains(i as usize)).collect();
    let mut verts = [0 as Vertex; 64];
    loop {
        let before = missing.len();
        missing.retain(|&rank| {
            universe.unrank_into(rank, &mut verts[..r]);
            if oracle.find(&Host { universe, bits: &bits }, &verts[..r]).is_some() {
                bits.insert(rank as usize);
                false
            } else {
                true
            }
        });
        if missing.is_empty() {
            return true;
        }
        if missing.len() == before {
            return false;
        }
    }
}

pub(crate) fn run_sweeps(g: &Hypergraph, oracle: &dyn Oracle, order: &[u64]) -> Result<ClosureResult> {
    let universe = g.universe()?;
    let r = universe.r() as usize;
    if order.len() as u64 != universe.size() {
        return Err(params("scan order must list every edge rank exactly once"));
    }
    let mut seen = FixedBitSet::with_capacity(order.len());
    for &i in order {
        if i >= universe.size() || seen.put(i as usize) {
            return Err(params("scan order must list every edge rank exactly once"));
        }
    }
    let mut bits = g.to_bits(&universe);
    let mut steps = Vec::new();
    let mut verts = vec![0 as Vertex; r];
    loop {
        let mut changed = false;
        for &rank in order {
            if bits.contains(rank as usize) {
                continue;
            }
            universe.unrank_into(rank, &mut verts);
            let witness = oracle.find(&Host { universe: &universe, bits: &bits }, &verts);
            if let Some(witness) = witness {
                bits.insert(rank as usize);
                steps.push(Step { edge: Edge::from_sorted_unchecked(&verts), phase_key: 0, witness });
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(finish(&universe, &bits, oracle.kind(), steps))
}
