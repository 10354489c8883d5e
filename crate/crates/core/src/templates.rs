//! Template graphs `T_{r,h,s}` and template saturation.
//!
//! `T^-_{r,h,s}` is `K_h^r` with every edge containing a fixed `s`-set `Z`
//! removed; `T_{r,h,s}` puts back one such edge, the special edge `f`. A
//! template saturation step adds an edge `e` when the current graph holds a
//! copy of `T^-` on some `h`-set `W ⊇ e` whose `Z` lies inside `e`.
//!
//! A template process converts into an `H`-process for every `H` on `h`
//! vertices with sparseness `s`: map a sparseness witness `S` onto `Z` and
//! its unique edge onto the added edge; every other edge of `H` avoids `S`
//! and so lands on an edge of `T^-`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{params, Error, Result};
use crate::hypercore::{subsets_colex, Edge, Hypergraph, Pattern, Vertex};
use crate::percolation::{
    run_rounds, ClosureResult, CertificateKind, Embedding, Host, Oracle, SaturationCertificate, Step,
    TemplateCopy, Witness,
};

/// Parameters of `T_{r,h,s}` with the canonical `Z = {0..s-1}` and
/// `f = {0..r-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSpec {
    pub r: u32,
    pub h: u32,
    pub s: u32,
    pub z: Vec<Vertex>,
    pub f: Edge,
}

impl TemplateSpec {
    pub fn new(r: u32, h: u32, s: u32) -> Result<TemplateSpec> {
        check_params(r, h, s)?;
        Ok(TemplateSpec { r, h, s, z: (0..s).collect(), f: Edge::new(0..r)? })
    }
}

fn check_params(r: u32, h: u32, s: u32) -> Result<()> {
    if !(h >= r && r >= s && s >= 2) {
        return Err(params(format!("h >= r >= s >= 2 (got r = {r}, h = {h}, s = {s})")));
    }
    Ok(())
}

/// Colex-first vertex set of minimum size lying in exactly one edge, with
/// that edge.
pub fn sparseness_witness(h: &Hypergraph) -> Result<(Vec<Vertex>, Edge)> {
    if h.edge_count() == 0 {
        return Err(Error::EmptyPattern);
    }
    for size in 1..=h.r() as usize {
        for set in subsets_colex(h.n(), size) {
            let mut containing = h.edges().filter(|e| e.is_superset_of(&set));
            if let (Some(e), None) = (containing.next(), containing.next()) {
                return Ok((set, e.clone()));
            }
        }
    }
    unreachable!("every edge is the only edge containing itself")
}

/// `s(H)`: the smallest size of a vertex set contained in exactly one edge.
pub fn sparseness(h: &Hypergraph) -> Result<u32> {
    sparseness_witness(h).map(|(set, _)| set.len() as u32)
}

/// `T^-_{r,h,s}` on vertices `0..h`.
pub fn template_minus(r: u32, h: u32, s: u32) -> Result<Hypergraph> {
    let spec = TemplateSpec::new(r, h, s)?;
    let k = Hypergraph::complete(h, r)?;
    Hypergraph::new(h, r, k.edges().filter(|e| !e.is_superset_of(&spec.z)).cloned())
}

/// `T_{r,h,s}` and its special edge.
pub fn template(r: u32, h: u32, s: u32) -> Result<(Hypergraph, Edge)> {
    let spec = TemplateSpec::new(r, h, s)?;
    let g = template_minus(r, h, s)?.with_edges([spec.f.clone()])?;
    Ok((g, spec.f))
}

pub(crate) struct TemplateMatcher {
    h: usize,
    s: usize,
}

impl TemplateMatcher {
    pub fn new(h: u32, s: u32) -> TemplateMatcher {
        TemplateMatcher { h: h as usize, s: s as usize }
    }

    /// Search order: `Z` over the `s`-subsets of `e` in colex order, then
    /// the extension of `e` to `W` as the lexicographically first
    /// `(h - r)`-set of outside vertices that keeps the `T^-` condition.
    pub fn find_copy(&self, host: &Host<'_>, e: &[Vertex]) -> Option<TemplateCopy> {
        let n = host.universe.n() as usize;
        let r = e.len();
        if self.h > n || self.s > r {
            return None;
        }
        let outside: Vec<Vertex> = (0..n as Vertex).filter(|v| e.binary_search(v).is_err()).collect();
        for zi in subsets_colex(r as Vertex, self.s) {
            let z: Vec<Vertex> = zi.iter().map(|&i| e[i as usize]).collect();
            let mut w = e.to_vec();
            if self.extend(host, &z, &outside, 0, &mut w) {
                w.sort_unstable();
                return Some(TemplateCopy { w, z });
            }
        }
        None
    }

    fn extend(&self, host: &Host<'_>, z: &[Vertex], outside: &[Vertex], from: usize, w: &mut Vec<Vertex>) -> bool {
        let need = self.h - w.len();
        if need == 0 {
            return true;
        }
        let r = host.universe.r() as usize;
        for idx in from..outside.len() {
            if outside.len() - idx < need {
                break;
            }
            let v = outside[idx];
            if self.compatible(host, z, w, v, r) {
                w.push(v);
                if self.extend(host, z, outside, idx + 1, w) {
                    return true;
                }
                w.pop();
            }
        }
        false
    }

    /// Every r-subset of `w + v` through `v` that does not contain `z` is present.
    fn compatible(&self, host: &Host<'_>, z: &[Vertex], w: &[Vertex], v: Vertex, r: usize) -> bool {
        let mut buf = [0 as Vertex; 64];
        subsets_colex(w.len() as Vertex, r - 1).all(|idx| {
            let sub = &mut buf[..r];
            for (slot, &i) in sub.iter_mut().zip(&idx) {
                *slot = w[i as usize];
            }
            sub[r - 1] = v;
            if z.iter().all(|x| sub[..r - 1].contains(x)) {
                return true;
            }
            sub.sort_unstable();
            host.has(sub)
        })
    }
}

impl Oracle for TemplateMatcher {
    fn find(&self, host: &Host<'_>, e: &[Vertex]) -> Option<Witness> {
        self.find_copy(host, e).map(Witness::Template)
    }

    fn reach(&self) -> usize {
        self.h
    }

    fn kind(&self) -> CertificateKind {
        CertificateKind::Template
    }
}

/// Finds `(W, Z)` with `Z ⊆ e ⊆ W`, `|W| = h`, `|Z| = s`, such that every
/// r-subset of `W` not containing `Z` is an edge of `g`.
pub fn creates_template_copy(g: &Hypergraph, e: &Edge, h: u32, s: u32) -> Result<Option<TemplateCopy>> {
    check_params(g.r(), h, s)?;
    if g.n() < h {
        return Err(params(format!("host needs at least h = {h} vertices")));
    }
    let universe = g.universe()?;
    universe.rank(e)?;
    if g.contains(e) {
        return Err(Error::EdgePresent(format!("{e:?}")));
    }
    let bits = g.to_bits(&universe);
    Ok(TemplateMatcher::new(h, s).find_copy(&Host { universe: &universe, bits: &bits }, e.vertices()))
}

/// Closure under `T_{r,h,s}`-template saturation steps.
pub fn template_closure(g: &Hypergraph, h: u32, s: u32) -> Result<ClosureResult> {
    check_params(g.r(), h, s)?;
    run_rounds(g, &TemplateMatcher::new(h, s))
}

/// Adds the missing edges of `g` in increasing `(key, colex)` order, each
/// witnessed by a template copy present at that moment. This replays an
/// inductive argument: it succeeds iff every edge becomes addable once all
/// edges of smaller key are in. Fails on the first edge that is not.
pub fn ordered_template_process(
    g: &Hypergraph,
    h: u32,
    s: u32,
    key: impl Fn(&Edge) -> u64,
) -> Result<SaturationCertificate> {
    check_params(g.r(), h, s)?;
    let universe = g.universe()?;
    let mut bits = g.to_bits(&universe);
    let mut missing: Vec<(u64, u64, Edge)> = universe
        .edges()
        .enumerate()
        .filter(|(i, _)| !bits.contains(*i))
        .map(|(i, e)| (key(&e), i as u64, e))
        .collect();
    missing.sort_by_key(|(k, i, _)| (*k, *i));
    let matcher = TemplateMatcher::new(h, s);
    let mut cert = SaturationCertificate::new(CertificateKind::Template, g.n(), g.r());
    for (phase_key, rank, edge) in missing {
        let copy = matcher
            .find_copy(&Host { universe: &universe, bits: &bits }, edge.vertices())
            .ok_or_else(|| Error::Invariant(format!("edge {edge:?} with phase key {phase_key} is not addable in order")))?;
        bits.insert(rank as usize);
        cert.steps.push(Step { edge, phase_key, witness: Witness::Template(copy) });
    }
    Ok(cert)
}

fn check_conversion(cert: &SaturationCertificate, h: &Pattern) -> Result<()> {
    if cert.kind != CertificateKind::Template {
        return Err(Error::CertificateKind { expected: "template", found: cert.kind.as_str() });
    }
    if h.s() < 2 {
        return Err(params(format!("pattern sparseness s >= 2 (got {})", h.s())));
    }
    if cert.r != h.r() {
        return Err(Error::UniformityMismatch { host: cert.r, pattern: h.r() });
    }
    for (i, step) in cert.steps.iter().enumerate() {
        let Witness::Template(t) = &step.witness else {
            return Err(Error::Invariant(format!("step {i} has a pattern witness")));
        };
        if t.w.len() != h.h() as usize || t.z.len() != h.s() as usize {
            return Err(params(format!(
                "step {i}: template witness has |W| = {}, |Z| = {} but the pattern has h = {}, s = {}",
                t.w.len(),
                t.z.len(),
                h.h(),
                h.s()
            )));
        }
    }
    Ok(())
}

/// Converts a template certificate into a pattern certificate over the
/// same edge sequence: each `(W, Z)` becomes the embedding sending the
/// sparseness witness onto `Z` and its edge onto the added edge, with
/// each class matched in increasing order.
pub fn template_cert_to_pattern_cert(cert: &SaturationCertificate, h: &Pattern) -> Result<SaturationCertificate> {
    convert(cert, h, |_| {})
}

/// As [`template_cert_to_pattern_cert`], but each class is matched by a
/// random bijection. Any such choice is a valid embedding.
pub fn template_cert_to_pattern_cert_shuffled<R: Rng>(
    cert: &SaturationCertificate,
    h: &Pattern,
    rng: &mut R,
) -> Result<SaturationCertificate> {
    let rng = std::cell::RefCell::new(rng);
    convert(cert, h, |class| class.shuffle(&mut *rng.borrow_mut()))
}

fn convert(
    cert: &SaturationCertificate,
    h: &Pattern,
    mut permute: impl FnMut(&mut Vec<Vertex>),
) -> Result<SaturationCertificate> {
    check_conversion(cert, h)?;
    let sparse = h.sparse_set();
    let sparse_edge = h.sparse_edge().vertices();
    let edge_rest: Vec<Vertex> = sparse_edge.iter().copied().filter(|v| !sparse.contains(v)).collect();
    let others: Vec<Vertex> = (0..h.h()).filter(|v| !sparse_edge.contains(v)).collect();
    let mut out = SaturationCertificate::new(CertificateKind::Pattern, cert.n, cert.r);
    for step in &cert.steps {
        let Witness::Template(t) = &step.witness else { unreachable!() };
        let e = step.edge.vertices();
        let mut z = t.z.clone();
        let mut e_rest: Vec<Vertex> = e.iter().copied().filter(|v| !t.z.contains(v)).collect();
        let mut w_rest: Vec<Vertex> = t.w.iter().copied().filter(|v| !e.contains(v)).collect();
        permute(&mut z);
        permute(&mut e_rest);
        permute(&mut w_rest);
        let mut mapping = vec![0; h.h() as usize];
        for (src, dst) in [(sparse, &z), (&edge_rest[..], &e_rest), (&others[..], &w_rest)] {
            for (&a, &b) in src.iter().zip(dst.iter()) {
                mapping[a as usize] = b;
            }
        }
        out.steps.push(Step {
            edge: step.edge.clone(),
            phase_key: step.phase_key,
            witness: Witness::Pattern(Embedding { mapping, covered_edge: step.edge.clone() }),
        });
    }
    Ok(out)
}
