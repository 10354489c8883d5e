//! Explicit weakly saturated graphs and gadgets, each paired with the
//! edge-count bound it is supposed to meet.
//!
//! Every gadget also exposes the induction measure ("phase key") under
//! which its missing edges become addable. Feeding that key to
//! [`crate::templates::ordered_template_process`] replays the inductive
//! argument edge by edge.

mod composite;

pub use composite::{main_construction, next_perfect_power, MainConstruction, MainSpec};

use std::fmt;

use crate::error::{params, Error, Result};
use crate::hypercore::{binomial, Edge, EdgeUniverse, Hypergraph, Pattern, Vertex};
use crate::percolation::is_weakly_saturated;

/// An integer inequality `lhs <= rhs` evaluated on a concrete instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: u128,
    pub rhs: u128,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, lhs: u128, rhs: u128) -> BoundCheck {
        BoundCheck { name: name.into(), lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

impl fmt::Display for BoundCheck {
    /// `#BOUND name lhs rhs holds|fails`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#BOUND {} {} {} {}", self.name, self.lhs, self.rhs, if self.holds() { "holds" } else { "fails" })
    }
}

/// A generated graph plus the bounds evaluated on it.
#[derive(Debug, Clone)]
pub struct Construction {
    pub graph: Hypergraph,
    pub bounds: Vec<BoundCheck>,
}

fn pow(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

fn check_hrs(r: u32, h: u32, s: u32) -> Result<()> {
    if !(h >= r && r >= s && s >= 2) {
        return Err(params(format!("h >= r >= s >= 2 (got r = {r}, h = {h}, s = {s})")));
    }
    Ok(())
}

/// `A = 0..size_a`, `B = size_a..size_a + size_b`, `C` = the first `h`
/// vertices of `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeSpec {
    pub r: u32,
    pub h: u32,
    pub s: u32,
    pub size_a: u32,
    pub size_b: u32,
}

impl ConeSpec {
    pub fn validate(&self) -> Result<()> {
        check_hrs(self.r, self.h, self.s)?;
        if self.size_b > self.size_a {
            return Err(params(format!("|B| <= |A| (got |A| = {}, |B| = {})", self.size_a, self.size_b)));
        }
        if self.size_a < self.h {
            return Err(params(format!("|A| >= h (got |A| = {}, h = {})", self.size_a, self.h)));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.size_a + self.size_b
    }

    /// `λ(f) = |f \ C|`.
    pub fn phase_key(&self) -> impl Fn(&Edge) -> u64 {
        let h = self.h;
        move |e| e.vertices().iter().filter(|&&v| v >= h).count() as u64
    }

    /// `r h^r |A|^(s-2) |B|`.
    pub fn extra_bound(&self) -> u128 {
        self.r as u128 * pow(self.h as u128, self.r) * pow(self.size_a as u128, self.s - 2) * self.size_b as u128
    }
}

/// Edges not inside `A` with at most `s - 1` vertices outside `C`.
pub fn cone_extra_edges(spec: &ConeSpec) -> Result<Vec<Edge>> {
    spec.validate()?;
    let universe = EdgeUniverse::new(spec.n(), spec.r)?;
    let lambda = spec.phase_key();
    Ok(universe
        .edges()
        .filter(|e| e.vertices()[e.len() - 1] >= spec.size_a && lambda(e) < spec.s as u64)
        .collect())
}

/// `K_A^r` plus the cone edges.
pub fn cone_gadget(spec: &ConeSpec) -> Result<Construction> {
    let extra = cone_extra_edges(spec)?;
    let bound = BoundCheck::new("cone_extra_edges", extra.len() as u128, spec.extra_bound());
    let base = Hypergraph::complete(spec.size_a, spec.r)?.with_vertex_count(spec.n())?;
    Ok(Construction { graph: base.with_edges(extra)?, bounds: vec![bound] })
}

/// Extends a weakly `H`-saturated graph on `k1` vertices to `k1 + k2`
/// vertices by adding the cone edges with `A` = the old vertices.
pub fn padded_example(g_minus: &Hypergraph, k2: u32, h: &Pattern) -> Result<Construction> {
    let k1 = g_minus.n();
    if g_minus.r() != h.r() {
        return Err(Error::UniformityMismatch { host: g_minus.r(), pattern: h.r() });
    }
    let spec = ConeSpec { r: h.r(), h: h.h(), s: h.s(), size_a: k1, size_b: k2 };
    spec.validate()?;
    if !is_weakly_saturated(g_minus, h)? {
        return Err(params("the base graph must be weakly H-saturated"));
    }
    let extra = cone_extra_edges(&spec)?;
    let graph = g_minus.with_vertex_count(k1 + k2)?.with_edges(extra)?;
    let bound = BoundCheck::new(
        "padded_edge_count",
        graph.edge_count() as u128,
        g_minus.edge_count() as u128 + spec.extra_bound(),
    );
    Ok(Construction { graph, bounds: vec![bound] })
}

/// Consecutive vertex intervals with the first `h` vertices of each marked
/// rigid.
#[derive(Debug, Clone)]
struct Parts {
    part_of: Vec<usize>,
    rigid: Vec<bool>,
}

impl Parts {
    fn new(sizes: &[u32], h: u32) -> Parts {
        let mut part_of = Vec::new();
        let mut rigid = Vec::new();
        for (i, &size) in sizes.iter().enumerate() {
            for off in 0..size {
                part_of.push(i);
                rigid.push(off < h);
            }
        }
        Parts { part_of, rigid }
    }

    fn hit(&self, e: &[Vertex]) -> Vec<usize> {
        let mut parts: Vec<usize> = e.iter().map(|&v| self.part_of[v as usize]).collect();
        parts.dedup();
        parts
    }

    fn rigid_count(&self, e: &[Vertex]) -> usize {
        e.iter().filter(|&&v| self.rigid[v as usize]).count()
    }
}

/// Parts `V_1..V_s` as consecutive intervals; `R_i` is the first `h`
/// vertices of `V_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpartiteSpec {
    pub r: u32,
    pub h: u32,
    pub s: u32,
    pub part_sizes: Vec<u32>,
}

impl SpartiteSpec {
    pub fn validate(&self) -> Result<()> {
        check_hrs(self.r, self.h, self.s)?;
        if self.part_sizes.len() != self.s as usize {
            return Err(params(format!("exactly s = {} parts (got {})", self.s, self.part_sizes.len())));
        }
        if let Some(&small) = self.part_sizes.iter().find(|&&p| p < self.h) {
            return Err(params(format!("every part has at least h = {} vertices (got {small})", self.h)));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.part_sizes.iter().sum()
    }

    fn parts(&self) -> Parts {
        Parts::new(&self.part_sizes, self.h)
    }

    /// Missing edges are ordered first by `ρ` (those with `s - 1` loose
    /// vertices), then by the loose count `λ >= s`.
    pub fn phase_key(&self) -> impl Fn(&Edge) -> u64 {
        let parts = self.parts();
        let (r, s) = (self.r as u64, self.s as usize);
        move |e| spartite_key(e.vertices(), s, r, |v| parts.part_of[v as usize], |v| parts.rigid[v as usize])
    }
}

fn spartite_key(e: &[Vertex], s: usize, r: u64, part: impl Fn(Vertex) -> usize, rigid: impl Fn(Vertex) -> bool) -> u64 {
    let loose = e.iter().filter(|&&v| !rigid(v)).count();
    if loose + 1 < s {
        return 0;
    }
    if loose + 1 == s {
        // ρ: smallest part intersection made only of rigid vertices
        let mut per_part = vec![(0usize, true); s];
        for &v in e {
            let p = &mut per_part[part(v)];
            p.0 += 1;
            p.1 &= rigid(v);
        }
        return per_part.iter().filter(|p| p.1).map(|p| p.0 as u64).min().unwrap_or(0);
    }
    r + 1 + loose as u64
}

/// Edges meeting every part with at least `r - s + 2` rigid vertices.
/// Edges missing a part are left out; they belong to the base set.
pub fn spartite_extra_edges(spec: &SpartiteSpec) -> Result<Vec<Edge>> {
    spec.validate()?;
    let parts = spec.parts();
    let need = (spec.r - spec.s + 2) as usize;
    let universe = EdgeUniverse::new(spec.n(), spec.r)?;
    Ok(universe
        .edges()
        .filter(|e| parts.hit(e.vertices()).len() == spec.s as usize && parts.rigid_count(e.vertices()) >= need)
        .collect())
}

/// All r-sets missing at least one part, plus [`spartite_extra_edges`].
pub fn spartite_gadget(spec: &SpartiteSpec) -> Result<Construction> {
    let extra = spartite_extra_edges(spec)?;
    let parts = spec.parts();
    let universe = EdgeUniverse::new(spec.n(), spec.r)?;
    let base = universe.edges().filter(|e| parts.hit(e.vertices()).len() < spec.s as usize);
    let bound = BoundCheck::new(
        "spartite_extra_edges",
        extra.len() as u128,
        spec.r as u128 * pow(spec.h as u128, spec.r - spec.s + 2) * pow(spec.part_sizes[0] as u128, spec.s - 2),
    );
    let mut bounds = Vec::new();
    // the per-part bound is only stated for equal part sizes
    if spec.part_sizes.iter().all(|&p| p == spec.part_sizes[0]) {
        bounds.push(bound);
    }
    Ok(Construction { graph: Hypergraph::new(spec.n(), spec.r, base.chain(extra))?, bounds })
}

/// `ℓ` clusters of `t` vertices each; `R_i` is the first `h` vertices of
/// each cluster, and the last cluster plays the role of `V_ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PercolateSpec {
    pub r: u32,
    pub h: u32,
    pub s: u32,
    pub clusters: u32,
    pub cluster_size: u32,
}

impl PercolateSpec {
    pub fn validate(&self) -> Result<()> {
        check_hrs(self.r, self.h, self.s)?;
        if self.clusters < self.s {
            return Err(params(format!("ℓ >= s (got ℓ = {}, s = {})", self.clusters, self.s)));
        }
        if self.cluster_size < self.h {
            return Err(params(format!("cluster size t >= h (got t = {}, h = {})", self.cluster_size, self.h)));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.clusters * self.cluster_size
    }

    fn parts(&self) -> Parts {
        Parts::new(&vec![self.cluster_size; self.clusters as usize], self.h)
    }

    /// `r h^(r-s+2) C(ℓ-1, s-1) t^(s-2)`.
    pub fn e2_bound(&self) -> u128 {
        self.r as u128
            * pow(self.h as u128, self.r - self.s + 2)
            * binomial(self.clusters as u64 - 1, self.s as u64 - 1) as u128
            * pow(self.cluster_size as u128, self.s - 2)
    }

    /// Edges inside some `V_Q` first (keyed as in the s-partite gadget),
    /// then by `j(e) = |e \ V_ℓ|`.
    pub fn phase_key(&self) -> impl Fn(&Edge) -> u64 {
        let parts = self.parts();
        let (r, s) = (self.r as u64, self.s as usize);
        let last = self.clusters as usize - 1;
        move |e| {
            let verts = e.vertices();
            let hit = parts.hit(verts);
            if hit.len() <= s && hit.contains(&last) {
                // the clusters hit become parts 0..hit.len()
                let local = |v: Vertex| hit.iter().position(|&q| q == parts.part_of[v as usize]).unwrap_or(0);
                spartite_key(verts, s, r, local, |v| parts.rigid[v as usize])
            } else {
                2 * r + 2 + verts.iter().filter(|&&v| parts.part_of[v as usize] != last).count() as u64
            }
        }
    }
}

/// The two edge sets of the percolation gadget.
#[derive(Debug, Clone)]
pub struct PercolateGadget {
    pub spec: PercolateSpec,
    /// Edges hitting at most `s - 1` clusters.
    pub e1: Vec<Edge>,
    /// Union over `Q` of the s-partite extra edges on `V_ℓ ∪ V_Q`.
    pub e2: Vec<Edge>,
    pub bounds: Vec<BoundCheck>,
}

impl PercolateGadget {
    pub fn graph(&self) -> Result<Hypergraph> {
        Hypergraph::new(self.spec.n(), self.spec.r, self.e1.iter().chain(&self.e2).cloned())
    }
}

/// Only `E_2`; the composite construction supplies its own `E_1` edges.
pub fn percolate_e2(spec: &PercolateSpec) -> Result<Vec<Edge>> {
    spec.validate()?;
    let parts = spec.parts();
    let last = spec.clusters as usize - 1;
    let need = (spec.r - spec.s + 2) as usize;
    let universe = EdgeUniverse::new(spec.n(), spec.r)?;
    Ok(universe
        .edges()
        .filter(|e| {
            let hit = parts.hit(e.vertices());
            hit.len() == spec.s as usize && hit.contains(&last) && parts.rigid_count(e.vertices()) >= need
        })
        .collect())
}

pub fn percolate_gadget(spec: &PercolateSpec) -> Result<PercolateGadget> {
    let e2 = percolate_e2(spec)?;
    let parts = spec.parts();
    let universe = EdgeUniverse::new(spec.n(), spec.r)?;
    let e1 = universe.edges().filter(|e| parts.hit(e.vertices()).len() < spec.s as usize).collect();
    let bounds = vec![BoundCheck::new("percolate_e2", e2.len() as u128, spec.e2_bound())];
    Ok(PercolateGadget { spec: *spec, e1, e2, bounds })
}

/// `K_h^r` on `0..h` inside `n` vertices, for patterns of sparseness 1.
pub fn s1_construction(h: &Pattern, n: u32) -> Result<Hypergraph> {
    if h.s() != 1 {
        return Err(params(format!("pattern sparseness s = 1 (got {})", h.s())));
    }
    if n < h.h() {
        return Err(params(format!("n >= h (got n = {n}, h = {})", h.h())));
    }
    Hypergraph::complete(h.h(), h.r())?.with_vertex_count(n)
}

/// All r-subsets of `0..n` meeting `{0..t-r-1}`; `C(n,r) - C(n-t+r,r)` edges.
pub fn clique_extremal(n: u32, t: u32, r: u32) -> Result<Hypergraph> {
    if !(n >= t && t >= r && r >= 1) {
        return Err(params(format!("n >= t >= r >= 1 (got n = {n}, t = {t}, r = {r})")));
    }
    let core = t - r;
    let universe = EdgeUniverse::new(n, r)?;
    Hypergraph::new(n, r, universe.edges().filter(|e| e.vertices()[0] < core))
}
