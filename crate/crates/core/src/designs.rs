//! Covering designs: families of `k`-subsets of `0..N` such that every
//! `t`-subset lies in some block. Built greedily; used as the block family
//! of the composite construction.

use std::fmt::Write;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{params, Error, Result};
use crate::hypercore::{binomial, subsets_colex, EdgeUniverse, Vertex};

/// Above this many candidate blocks, each greedy round scores a random
/// sample instead of every block.
pub const EXHAUSTIVE_CANDIDATE_LIMIT: u64 = 50_000;
pub const SAMPLED_CANDIDATES_PER_ROUND: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverDesign {
    pub points: u32,
    pub k: u32,
    pub t: u32,
    /// Sorted blocks, in the order the greedy chose them.
    pub blocks: Vec<Vec<Vertex>>,
    /// Slack used when comparing against the approximate-design bound.
    pub delta: Ratio<u128>,
    /// Whether candidate blocks were sampled rather than enumerated.
    pub sampled: bool,
}

fn check_params(points: u32, k: u32, t: u32) -> Result<()> {
    if !(points >= k && k >= t && t >= 1) {
        return Err(params(format!("N >= k >= t >= 1 (got N = {points}, k = {k}, t = {t})")));
    }
    Ok(())
}

/// Greedy cover: repeatedly take the block covering the most uncovered
/// `t`-sets, breaking ties towards the colex-least block.
pub fn greedy_cover(points: u32, k: u32, t: u32) -> Result<CoverDesign> {
    greedy_cover_seeded(points, k, t, 0)
}

/// As [`greedy_cover`]; `seed` only matters when the candidate family is
/// too large to enumerate.
pub fn greedy_cover_seeded(points: u32, k: u32, t: u32, seed: u64) -> Result<CoverDesign> {
    check_params(points, k, t)?;
    let tsets = EdgeUniverse::new(points, t)?;
    let mut uncovered = FixedBitSet::with_capacity(tsets.size() as usize);
    uncovered.insert_range(..);
    let mut remaining = tsets.size();
    let score = |block: &[Vertex], uncovered: &FixedBitSet| -> u64 {
        subsets_colex(k, t as usize)
            .filter(|idx| {
                let sub: Vec<Vertex> = idx.iter().map(|&i| block[i as usize]).collect();
                uncovered.contains(tsets.rank_sorted(&sub) as usize)
            })
            .count() as u64
    };

    let exhaustive = binomial(points as u64, k as u64) <= EXHAUSTIVE_CANDIDATE_LIMIT;
    let all_blocks: Vec<Vec<Vertex>> = if exhaustive { subsets_colex(points, k as usize).collect() } else { Vec::new() };
    let block_universe = EdgeUniverse::with_limit(points, k, u64::MAX)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::new();

    while remaining > 0 {
        let sampled;
        let candidates: &[Vec<Vertex>] = if exhaustive {
            &all_blocks
        } else {
            let mut c: Vec<Vec<Vertex>> = (0..SAMPLED_CANDIDATES_PER_ROUND)
                .map(|_| {
                    let mut b: Vec<Vertex> = sample(&mut rng, points as usize, k as usize)
                        .into_iter()
                        .map(|v| v as Vertex)
                        .collect();
                    b.sort_unstable();
                    b
                })
                .collect();
            // always offer a block through the first uncovered t-set
            let first = uncovered.ones().next().expect("remaining > 0");
            let mut b = vec![0; t as usize];
            tsets.unrank_into(first as u64, &mut b);
            let mut v = 0;
            while b.len() < k as usize {
                if !b.contains(&v) {
                    b.push(v);
                }
                v += 1;
            }
            b.sort_unstable();
            c.push(b);
            sampled = c;
            &sampled
        };
        let best = candidates
            .par_iter()
            .map(|b| (score(b, &uncovered), std::cmp::Reverse(block_universe.rank_sorted(b)), b))
            .max_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)))
            .expect("candidate list is never empty");
        let block = best.2.clone();
        for idx in subsets_colex(k, t as usize) {
            let sub: Vec<Vertex> = idx.iter().map(|&i| block[i as usize]).collect();
            let rank = tsets.rank_sorted(&sub) as usize;
            if uncovered.contains(rank) {
                uncovered.set(rank, false);
                remaining -= 1;
            }
        }
        blocks.push(block);
    }
    Ok(CoverDesign { points, k, t, blocks, delta: Ratio::from_integer(0), sampled: !exhaustive })
}

/// Exhaustive check that every `t`-subset lies in a block and every block
/// is a valid `k`-subset.
pub fn verify_cover(d: &CoverDesign) -> bool {
    if check_params(d.points, d.k, d.t).is_err() {
        return false;
    }
    let valid_block =
        |b: &Vec<Vertex>| b.len() == d.k as usize && b.windows(2).all(|w| w[0] < w[1]) && b.iter().all(|&v| v < d.points);
    if !d.blocks.iter().all(valid_block) {
        return false;
    }
    subsets_colex(d.points, d.t as usize).all(|tset| d.blocks.iter().any(|b| tset.iter().all(|v| b.contains(v))))
}

/// `(1 + delta) * C(N, t) / C(k, t)` as an exact rational.
pub fn rodl_bound(points: u32, k: u32, t: u32, delta: Ratio<u128>) -> Ratio<u128> {
    let num = binomial(points as u64, t as u64) as u128;
    let den = binomial(k as u64, t as u64).max(1) as u128;
    (Ratio::from_integer(1) + delta) * Ratio::new(num, den)
}

pub fn write_cover(d: &CoverDesign) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", d.points, d.k, d.t).unwrap();
    for b in &d.blocks {
        let line: Vec<String> = b.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn parse_cover(text: &str) -> Result<CoverDesign> {
    let mut header: Option<(u32, u32, u32)> = None;
    let mut blocks = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: String| Error::Parse { line: idx + 1, message: m };
        let nums: Vec<u32> = line
            .split_whitespace()
            .map(|tok| tok.parse().map_err(|_| err(format!("expected an integer, found `{tok}`"))))
            .collect::<Result<_>>()?;
        match header {
            None => {
                let [n, k, t] = nums[..] else {
                    return Err(err("header must be `N k t`".into()));
                };
                check_params(n, k, t).map_err(|e| err(e.to_string()))?;
                header = Some((n, k, t));
            }
            Some((n, k, _)) => {
                if nums.len() != k as usize || nums.windows(2).any(|w| w[0] >= w[1]) || nums.iter().any(|&v| v >= n) {
                    return Err(err(format!("block must be {k} increasing points below {n}")));
                }
                blocks.push(nums);
            }
        }
    }
    let (points, k, t) = header.ok_or(Error::Parse { line: 0, message: "missing `N k t` header".into() })?;
    Ok(CoverDesign { points, k, t, blocks, delta: Ratio::from_integer(0), sampled: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_equal_t_lists_every_set() {
        let d = greedy_cover(6, 2, 2).unwrap();
        assert_eq!(d.blocks.len(), 15);
        assert_eq!(d.blocks, subsets_colex(6, 2).collect::<Vec<_>>());
        assert!(verify_cover(&d));
    }

    #[test]
    fn greedy_six_three_two_regression() {
        let d = greedy_cover(6, 3, 2).unwrap();
        assert!(verify_cover(&d));
        // frozen from the deterministic greedy; C(6,2) / C(3,2) = 5 is the floor
        assert_eq!(d.blocks.len(), 7);
        assert_eq!(greedy_cover(6, 3, 2).unwrap(), d);
    }

    #[test]
    fn greedy_seven_three_two_valid() {
        let d = greedy_cover(7, 3, 2).unwrap();
        assert!(verify_cover(&d));
        // the first greedy picks here happen to form a Fano plane
        assert_eq!(d.blocks.len(), 7);
    }

    #[test]
    fn uniquely_covering_block_removal_breaks_cover() {
        let d = greedy_cover(7, 3, 2).unwrap();
        let count = |tset: &[u32], blocks: &[Vec<u32>]| blocks.iter().filter(|b| tset.iter().all(|v| b.contains(v))).count();
        let victim = (0..d.blocks.len())
            .find(|&i| {
                subsets_colex(3, 2).any(|idx| {
                    let sub: Vec<u32> = idx.iter().map(|&j| d.blocks[i][j as usize]).collect();
                    count(&sub, &d.blocks) == 1
                })
            })
            .unwrap();
        let mut broken = d.clone();
        broken.blocks.remove(victim);
        assert!(!verify_cover(&broken));
    }

    #[test]
    fn all_blocks_is_a_cover() {
        let d = CoverDesign {
            points: 7,
            k: 4,
            t: 3,
            blocks: subsets_colex(7, 4).collect(),
            delta: Ratio::from_integer(0),
            sampled: false,
        };
        assert!(verify_cover(&d));
    }

    #[test]
    fn bound_values() {
        assert_eq!(rodl_bound(6, 3, 2, Ratio::from_integer(0)), Ratio::from_integer(5));
        assert_eq!(rodl_bound(8, 3, 3, Ratio::from_integer(0)), Ratio::from_integer(56));
        assert_eq!(rodl_bound(9, 3, 2, Ratio::from_integer(0)), Ratio::from_integer(12));
        assert_eq!(rodl_bound(6, 3, 2, Ratio::new(1, 5)), Ratio::from_integer(6));
    }

    #[test]
    fn steiner_triple_system_meets_bound() {
        // affine plane AG(2,3): lines of Z_3 x Z_3
        let pt = |x: u32, y: u32| 3 * x + y;
        let mut blocks = Vec::new();
        for (dx, dy) in [(0, 1), (1, 0), (1, 1), (1, 2)] {
            let mut seen = std::collections::BTreeSet::new();
            for x in 0..3 {
                for y in 0..3 {
                    let mut l: Vec<u32> = (0..3).map(|i| pt((x + i * dx) % 3, (y + i * dy) % 3)).collect();
                    l.sort();
                    seen.insert(l);
                }
            }
            blocks.extend(seen);
        }
        let d = CoverDesign { points: 9, k: 3, t: 2, blocks, delta: Ratio::from_integer(0), sampled: false };
        assert!(verify_cover(&d));
        assert_eq!(Ratio::from_integer(d.blocks.len() as u128), rodl_bound(9, 3, 2, Ratio::from_integer(0)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(greedy_cover(3, 4, 2).is_err());
        assert!(greedy_cover(6, 2, 3).is_err());
        assert!(greedy_cover(6, 2, 0).is_err());
    }

    #[test]
    fn sampled_path_still_covers() {
        let d = greedy_cover_seeded(26, 6, 2, 3).unwrap();
        assert!(d.sampled);
        assert!(verify_cover(&d));
        assert_eq!(greedy_cover_seeded(26, 6, 2, 3).unwrap(), d);
    }

    #[test]
    fn text_round_trip() {
        let d = greedy_cover(7, 3, 2).unwrap();
        let text = write_cover(&d);
        let back = parse_cover(&text).unwrap();
        assert_eq!(back.blocks, d.blocks);
        assert_eq!(write_cover(&back), text);
        assert!(matches!(parse_cover("5 3 2\n0 1\n"), Err(Error::Parse { line: 2, .. })));
    }
}
