//! The composite construction: copies of a small weakly saturated graph
//! placed on unions of clusters along a covering design, plus the
//! percolation gadget's `E_2` across clusters.

use num_rational::Ratio;

use super::{padded_example, percolate_e2, BoundCheck, PercolateSpec};
use crate::designs::{greedy_cover_seeded, rodl_bound, verify_cover, CoverDesign};
use crate::error::{Error, Result};
use crate::hypercore::{Edge, Hypergraph, Pattern, Vertex};
use crate::percolation::{closure, is_weakly_saturated, ClosureResult};

/// Inputs of the composite construction.
#[derive(Debug, Clone)]
pub struct MainSpec {
    pub pattern: Pattern,
    /// Target vertex count; a multiple of the cluster size `m^(1/(s-1))`.
    pub n: u32,
    /// A weakly `H`-saturated graph on `m_1` vertices. It is padded to the
    /// next perfect `(s-1)`-st power `m` when `m_1` is not one.
    pub base: Hypergraph,
    /// Block family over the clusters; a greedy cover is built when absent.
    pub cover: Option<CoverDesign>,
    /// Accounting slack, only used in reported ratios.
    pub eps: Ratio<u128>,
    /// Seed for the greedy cover's sampled mode.
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct MainConstruction {
    pub graph: Hypergraph,
    pub m1: u32,
    pub m: u32,
    /// `m^(1/(s-1))`.
    pub cluster_size: u32,
    /// `ℓ = n / cluster_size`.
    pub clusters: u32,
    /// `m^(1 - 1/(s-1))`.
    pub block_size: u32,
    pub cover: CoverDesign,
    /// The (possibly padded) `m`-vertex graph copied onto each block.
    pub g_m: Hypergraph,
    /// `|E(G'_n)|`, the union of the block copies.
    pub copies_edges: usize,
    pub e2_edges: usize,
    pub bounds: Vec<BoundCheck>,
    /// Reported, never asserted: densities against `n^(s-1)` and the
    /// cover size against the approximate-design bound.
    pub ratios: Vec<(String, f64)>,
    pub percolation: ClosureResult,
}

/// Smallest `q` with `q^p >= m`, and `q^p`.
pub fn next_perfect_power(m: u32, p: u32) -> (u32, u32) {
    let mut q = 1u32;
    while (q as u64).pow(p) < m as u64 {
        q += 1;
    }
    (q, q.pow(p))
}

fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}

pub fn main_construction(spec: &MainSpec) -> Result<MainConstruction> {
    let h = &spec.pattern;
    let (r, s, hv) = (h.r(), h.s(), h.h());
    if s < 2 {
        return Err(invariant(format!("sparseness s >= 2 (got {s}); use the s = 1 construction")));
    }
    if spec.base.r() != r {
        return Err(Error::UniformityMismatch { host: spec.base.r(), pattern: r });
    }
    let m1 = spec.base.n();
    if !is_weakly_saturated(&spec.base, h)? {
        return Err(invariant("G_m1 is weakly H-saturated"));
    }
    let (q, m) = next_perfect_power(m1, s - 1);
    let g_m = if m > m1 {
        if m - m1 > m1 {
            return Err(invariant(format!("padding m - m_1 <= m_1 (m_1 = {m1}, m = {m})")));
        }
        padded_example(&spec.base, m - m1, h)?.graph
    } else {
        spec.base.clone()
    };
    if q < hv {
        return Err(invariant(format!("cluster size m^(1/(s-1)) = {q} >= h = {hv}")));
    }
    if !spec.n.is_multiple_of(q) {
        return Err(invariant(format!("n = {} is a multiple of the cluster size {q}", spec.n)));
    }
    let ell = spec.n / q;
    if ell < s {
        return Err(invariant(format!("cluster count ℓ = {ell} >= s = {s}")));
    }
    let k = m / q;
    if ell < k {
        return Err(invariant(format!("cluster count ℓ = {ell} >= block size {k}")));
    }
    let cover = match &spec.cover {
        Some(c) => {
            if (c.points, c.k, c.t) != (ell, k, s - 1) {
                return Err(invariant(format!(
                    "cover parameters (N, k, t) = ({ell}, {k}, {}) (got ({}, {}, {}))",
                    s - 1,
                    c.points,
                    c.k,
                    c.t
                )));
            }
            if !verify_cover(c) {
                return Err(invariant("the cover covers every (s-1)-set of clusters"));
            }
            c.clone()
        }
        None => {
            let mut c = greedy_cover_seeded(ell, k, s - 1, spec.seed)?;
            c.delta = spec.eps;
            c
        }
    };

    let mut copies = std::collections::BTreeSet::new();
    for block in &cover.blocks {
        let support: Vec<Vertex> = block.iter().flat_map(|&c| c * q..(c + 1) * q).collect();
        for e in g_m.edges() {
            copies.insert(Edge::new(e.vertices().iter().map(|&v| support[v as usize]))?);
        }
    }
    let copies_edges = copies.len();
    let pspec = PercolateSpec { r, h: hv, s, clusters: ell, cluster_size: q };
    let e2 = percolate_e2(&pspec)?;
    let e2_edges = e2.len();
    let graph = Hypergraph::new(spec.n, r, copies.into_iter().chain(e2))?;

    let bounds = vec![
        BoundCheck::new(
            "copies_edges",
            copies_edges as u128,
            cover.blocks.len() as u128 * g_m.edge_count() as u128,
        ),
        BoundCheck::new("percolate_e2", e2_edges as u128, pspec.e2_bound()),
    ];
    if let Some(b) = bounds.iter().find(|b| !b.holds()) {
        return Err(invariant(format!("bound {} ({} <= {})", b.name, b.lhs, b.rhs)));
    }

    let norm = |x: usize, size: u32| x as f64 / (size as f64).powi(s as i32 - 1);
    let design_bound = rodl_bound(ell, k, s - 1, cover.delta);
    let ratios = vec![
        ("g_m_density".to_string(), norm(g_m.edge_count(), m)),
        ("g_n_density".to_string(), norm(graph.edge_count(), spec.n)),
        ("copies_density".to_string(), norm(copies_edges, spec.n)),
        ("e2_density".to_string(), norm(e2_edges, spec.n)),
        (
            "cover_vs_design_bound".to_string(),
            cover.blocks.len() as f64 * *design_bound.denom() as f64 / *design_bound.numer() as f64,
        ),
    ];

    let percolation = closure(&graph, h)?;
    if !percolation.percolated {
        return Err(invariant("the composite graph is weakly H-saturated"));
    }
    Ok(MainConstruction {
        graph,
        m1,
        m,
        cluster_size: q,
        clusters: ell,
        block_size: k,
        cover,
        g_m,
        copies_edges,
        e2_edges,
        bounds,
        ratios,
        percolation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::clique_extremal;

    fn spec(name: &str, n: u32, base: Hypergraph) -> MainSpec {
        MainSpec {
            pattern: Pattern::from_shorthand(name).unwrap(),
            n,
            base,
            cover: None,
            eps: Ratio::new(1, 10),
            seed: 0,
        }
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(next_perfect_power(4, 1), (4, 4));
        assert_eq!(next_perfect_power(10, 2), (4, 16));
        assert_eq!(next_perfect_power(16, 2), (4, 16));
        assert_eq!(next_perfect_power(9, 3), (3, 27));
    }

    #[test]
    fn triangle_twelve() {
        let star = Hypergraph::from_lists(4, 2, [[0, 1], [0, 2], [0, 3]]).unwrap();
        let out = main_construction(&spec("K3", 12, star)).unwrap();
        assert_eq!((out.cluster_size, out.clusters, out.block_size), (4, 3, 1));
        assert_eq!(out.cover.blocks, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(out.copies_edges, 9);
        assert!(out.bounds.iter().all(BoundCheck::holds));
        assert!(out.percolation.percolated);
    }

    #[test]
    fn k4_fifteen() {
        let base = clique_extremal(5, 4, 2).unwrap();
        let out = main_construction(&spec("K4", 15, base)).unwrap();
        assert_eq!(out.copies_edges, 21);
        assert!(out.percolation.percolated);
    }

    #[test]
    fn single_cluster_rejected() {
        let star = Hypergraph::from_lists(4, 2, [[0, 1], [0, 2], [0, 3]]).unwrap();
        assert!(matches!(main_construction(&spec("K3", 4, star)), Err(Error::Invariant(_))));
    }

    #[test]
    fn unsaturated_base_rejected() {
        let sparse = Hypergraph::from_lists(4, 2, [[0, 1], [2, 3]]).unwrap();
        let err = main_construction(&spec("K3", 12, sparse)).unwrap_err();
        assert_eq!(err, Error::Invariant("G_m1 is weakly H-saturated".into()));
    }

    #[test]
    fn mismatched_cover_rejected() {
        let star = Hypergraph::from_lists(4, 2, [[0, 1], [0, 2], [0, 3]]).unwrap();
        let mut sp = spec("K3", 12, star);
        sp.cover = Some(greedy_cover_seeded(4, 1, 1, 0).unwrap());
        assert!(main_construction(&sp).is_err());
    }
}
