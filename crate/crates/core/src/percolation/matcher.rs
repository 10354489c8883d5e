//! Pinned-edge subgraph search: find a copy of `H` in `G + e` whose image
//! uses `e`.

use fixedbitset::FixedBitSet;
use itertools::Itertools;

use super::certificate::{CertificateKind, Embedding, Witness};
use crate::hypercore::{Edge, EdgeUniverse, Pattern, Vertex};

/// Read-only view of a host graph as a rank bitset.
pub(crate) struct Host<'a> {
    pub universe: &'a EdgeUniverse,
    pub bits: &'a FixedBitSet,
}

impl Host<'_> {
    #[inline]
    pub fn has(&self, sorted: &[Vertex]) -> bool {
        self.bits.contains(self.universe.rank_sorted(sorted) as usize)
    }
}

/// Something that decides whether a missing edge can be added and, if so,
/// produces the witness.
pub(crate) trait Oracle: Sync {
    fn find(&self, host: &Host<'_>, e: &[Vertex]) -> Option<Witness>;
    /// Upper bound on the number of vertices spanned by a witness.
    fn reach(&self) -> usize;
    fn kind(&self) -> CertificateKind;
}

struct Plan {
    pinned: usize,
    /// Remaining pattern vertices in assignment order.
    order: Vec<Vertex>,
    /// `checks[i]`: pattern edges (other than the pinned one) whose last
    /// vertex to be assigned is `order[i]`.
    checks: Vec<Vec<usize>>,
}

pub(crate) struct PatternMatcher {
    h: usize,
    r: usize,
    edges: Vec<Vec<Vertex>>,
    plans: Vec<Plan>,
    perms: Vec<Vec<usize>>,
}

impl PatternMatcher {
    pub fn new(pattern: &Pattern) -> PatternMatcher {
        let h = pattern.h() as usize;
        let r = pattern.r() as usize;
        let edges: Vec<Vec<Vertex>> = pattern.graph().edges().map(|e| e.vertices().to_vec()).collect();
        let degree = pattern.graph().degrees();
        let plans = edges
            .iter()
            .enumerate()
            .map(|(pinned, f)| {
                let mut order: Vec<Vertex> = (0..h as Vertex).filter(|v| !f.contains(v)).collect();
                order.sort_by_key(|&v| (std::cmp::Reverse(degree[v as usize]), v));
                let mut position = vec![usize::MAX; h];
                for &v in f {
                    position[v as usize] = 0;
                }
                for (i, &v) in order.iter().enumerate() {
                    position[v as usize] = i + 1;
                }
                let mut checks = vec![Vec::new(); order.len()];
                for (idx, g) in edges.iter().enumerate() {
                    if idx == pinned {
                        continue;
                    }
                    let last = g.iter().map(|&v| position[v as usize]).max().unwrap();
                    // an edge inside f other than f itself cannot exist
                    if last > 0 {
                        checks[last - 1].push(idx);
                    }
                }
                Plan { pinned, order, checks }
            })
            .collect();
        let perms = (0..r).permutations(r).collect();
        PatternMatcher { h, r, edges, plans, perms }
    }

    /// First embedding of `H` into `host + e` that maps some pattern edge
    /// onto `e`. Deterministic: pinned pattern edges in colex order, then
    /// bijections onto `e` in lexicographic order, then host vertices in
    /// increasing index.
    pub fn find_embedding(&self, host: &Host<'_>, e: &[Vertex]) -> Option<Vec<Vertex>> {
        let n = host.universe.n() as usize;
        if self.h > n || e.len() != self.r {
            return None;
        }
        let mut map = vec![Vertex::MAX; self.h];
        let mut used = vec![false; n];
        for &u in e {
            used[u as usize] = true;
        }
        for plan in &self.plans {
            let f = &self.edges[plan.pinned];
            for perm in &self.perms {
                for (k, &v) in f.iter().enumerate() {
                    map[v as usize] = e[perm[k]];
                }
                if self.extend(host, plan, 0, &mut map, &mut used) {
                    return Some(map);
                }
            }
            for &v in f {
                map[v as usize] = Vertex::MAX;
            }
        }
        None
    }

    fn extend(&self, host: &Host<'_>, plan: &Plan, depth: usize, map: &mut [Vertex], used: &mut [bool]) -> bool {
        if depth == plan.order.len() {
            return true;
        }
        let v = plan.order[depth] as usize;
        let mut image = [0 as Vertex; 64];
        for u in 0..used.len() {
            if used[u] {
                continue;
            }
            map[v] = u as Vertex;
            let ok = plan.checks[depth].iter().all(|&idx| {
                let img = &mut image[..self.r];
                for (slot, &pv) in img.iter_mut().zip(&self.edges[idx]) {
                    *slot = map[pv as usize];
                }
                img.sort_unstable();
                host.has(img)
            });
            if ok {
                used[u] = true;
                if self.extend(host, plan, depth + 1, map, used) {
                    return true;
                }
                used[u] = false;
            }
        }
        map[v] = Vertex::MAX;
        false
    }
}

impl Oracle for PatternMatcher {
    fn find(&self, host: &Host<'_>, e: &[Vertex]) -> Option<Witness> {
        self.find_embedding(host, e).map(|mapping| {
            Witness::Pattern(Embedding { mapping, covered_edge: Edge::from_sorted_unchecked(e) })
        })
    }

    fn reach(&self) -> usize {
        self.h
    }

    fn kind(&self) -> CertificateKind {
        CertificateKind::Pattern
    }
}
