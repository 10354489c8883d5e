//! Certificate replay. Deliberately shares no code with the closure engine:
//! the host graph is a hash set of vertex lists and every witness is
//! re-checked from its raw description.

use std::collections::HashSet;
use std::fmt;

use super::certificate::{CertificateKind, SaturationCertificate, Witness};
use crate::hypercore::{Hypergraph, Pattern, Vertex};

/// First step at which a certificate fails. `step` is 0-based; a failure
/// before any step (header mismatch) reports `step == usize::MAX`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidStep {
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for InvalidStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.step == usize::MAX {
            write!(f, "certificate header: {}", self.reason)
        } else {
            write!(f, "step {}: {}", self.step, self.reason)
        }
    }
}

impl std::error::Error for InvalidStep {}

/// Summary of a successful replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub steps: usize,
    pub final_edges: usize,
    /// Whether the replay ends at the complete graph.
    pub complete: bool,
}

fn header(reason: impl Into<String>) -> InvalidStep {
    InvalidStep { step: usize::MAX, reason: reason.into() }
}

fn count_r_subsets(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

struct Replayer {
    n: u32,
    r: usize,
    present: HashSet<Vec<Vertex>>,
}

impl Replayer {
    fn start(g: &Hypergraph, cert: &SaturationCertificate) -> Result<Replayer, InvalidStep> {
        if cert.n != g.n() || cert.r != g.r() {
            return Err(header(format!(
                "certificate is for n={}, r={} but the graph has n={}, r={}",
                cert.n,
                cert.r,
                g.n(),
                g.r()
            )));
        }
        let present = g.edges().map(|e| e.vertices().to_vec()).collect();
        Ok(Replayer { n: g.n(), r: g.r() as usize, present })
    }

    fn check_new_edge(&self, i: usize, edge: &[Vertex]) -> Result<(), InvalidStep> {
        let fail = |reason: String| Err(InvalidStep { step: i, reason });
        if edge.len() != self.r {
            return fail(format!("edge {edge:?} does not have {} vertices", self.r));
        }
        if edge.windows(2).any(|w| w[0] >= w[1]) || edge.iter().any(|&v| v >= self.n) {
            return fail(format!("edge {edge:?} is not an increasing list inside 0..{}", self.n));
        }
        if self.present.contains(edge) {
            return fail(format!("edge {edge:?} is already present"));
        }
        Ok(())
    }

    fn finish(self, steps: usize) -> Replay {
        let complete = self.present.len() as u128 == count_r_subsets(self.n as u64, self.r as u64);
        Replay { steps, final_edges: self.present.len(), complete }
    }
}

/// Replays a pattern certificate. Every step's edge must be absent before
/// the step and its witness must embed `h` into the current graph plus the
/// edge, with the edge in the image.
pub fn verify_certificate(g: &Hypergraph, h: &Pattern, cert: &SaturationCertificate) -> Result<Replay, InvalidStep> {
    if cert.kind != CertificateKind::Pattern {
        return Err(header("expected a pattern certificate"));
    }
    if h.r() != g.r() {
        return Err(header("pattern and graph have different uniformity"));
    }
    let mut state = Replayer::start(g, cert)?;
    let pattern_edges: Vec<Vec<Vertex>> = h.graph().edges().map(|e| e.vertices().to_vec()).collect();
    let hv = h.h() as usize;
    for (i, step) in cert.steps.iter().enumerate() {
        let fail = |reason: String| Err(InvalidStep { step: i, reason });
        let edge = step.edge.vertices().to_vec();
        state.check_new_edge(i, &edge)?;
        let Witness::Pattern(emb) = &step.witness else {
            return fail("template witness inside a pattern certificate".into());
        };
        if emb.covered_edge.vertices() != edge.as_slice() {
            return fail("witness covers a different edge".into());
        }
        let map = &emb.mapping;
        if map.len() != hv {
            return fail(format!("mapping has {} entries, pattern has {hv} vertices", map.len()));
        }
        if map.iter().any(|&u| u >= state.n) {
            return fail("mapping leaves the vertex range".into());
        }
        let distinct: HashSet<Vertex> = map.iter().copied().collect();
        if distinct.len() != map.len() {
            return fail("mapping is not injective".into());
        }
        let mut uses_edge = false;
        for pe in &pattern_edges {
            let mut img: Vec<Vertex> = pe.iter().map(|&v| map[v as usize]).collect();
            img.sort_unstable();
            if img == edge {
                uses_edge = true;
            } else if !state.present.contains(&img) {
                return fail(format!("image {img:?} of pattern edge {pe:?} is missing"));
            }
        }
        if !uses_edge {
            return fail("the added edge is not the image of any pattern edge".into());
        }
        state.present.insert(edge);
    }
    Ok(state.finish(cert.steps.len()))
}

/// Replays a template certificate for `T_{r,h,s}`.
pub fn verify_template_certificate(
    g: &Hypergraph,
    h: u32,
    s: u32,
    cert: &SaturationCertificate,
) -> Result<Replay, InvalidStep> {
    if cert.kind != CertificateKind::Template {
        return Err(header("expected a template certificate"));
    }
    let mut state = Replayer::start(g, cert)?;
    let r = state.r;
    if (h as usize) < r || s as usize > r || s == 0 {
        return Err(header(format!("template parameters need h >= r >= s >= 1 (h = {h}, r = {r}, s = {s})")));
    }
    for (i, step) in cert.steps.iter().enumerate() {
        let fail = |reason: String| Err(InvalidStep { step: i, reason });
        let edge = step.edge.vertices().to_vec();
        state.check_new_edge(i, &edge)?;
        let Witness::Template(t) = &step.witness else {
            return fail("pattern witness inside a template certificate".into());
        };
        let (w, z) = (&t.w, &t.z);
        if w.len() != h as usize || z.len() != s as usize {
            return fail(format!("|W| = {}, |Z| = {}; expected {h} and {s}", w.len(), z.len()));
        }
        if w.windows(2).any(|p| p[0] >= p[1]) || z.windows(2).any(|p| p[0] >= p[1]) {
            return fail("W and Z must be increasing".into());
        }
        if w.iter().any(|&v| v >= state.n) {
            return fail("W leaves the vertex range".into());
        }
        if !z.iter().all(|v| edge.contains(v)) {
            return fail("Z is not inside the added edge".into());
        }
        if !edge.iter().all(|v| w.contains(v)) {
            return fail("the added edge is not inside W".into());
        }
        // every r-subset of W avoiding Z as a subset must be present
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            let sub: Vec<Vertex> = idx.iter().map(|&k| w[k]).collect();
            let has_z = z.iter().all(|v| sub.contains(v));
            if !has_z && !state.present.contains(&sub) {
                return fail(format!("template edge {sub:?} is missing"));
            }
            // lexicographic successor of the index combination
            let mut k = r;
            while k > 0 && idx[k - 1] == w.len() - r + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..r {
                idx[j] = idx[j - 1] + 1;
            }
        }
        state.present.insert(edge);
    }
    Ok(state.finish(cert.steps.len()))
}
