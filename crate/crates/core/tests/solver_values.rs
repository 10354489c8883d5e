use wsat_core::hypercore::binomial;
use wsat_core::percolation::{clique_wsat_value, is_weakly_saturated};
use wsat_core::solver::{wsat_exact, wsat_upper, SolverOptions, WsatResult};
use wsat_core::Pattern;

fn exact(n: u32, h: &Pattern) -> WsatResult {
    wsat_exact(n, h, &SolverOptions::default()).unwrap().exact().expect("within budget").clone()
}

#[test]
fn cliques_match_formula() {
    for r in 2..=5u32 {
        for t in r..=6 {
            for n in t..=7 {
                if binomial(n as u64, r as u64) > 20 {
                    continue;
                }
                let h = Pattern::from_shorthand(&format!("K{t}^{r}")).unwrap();
                assert_eq!(exact(n, &h).value, clique_wsat_value(n, t, r).unwrap(), "K{t}^{r} on {n}");
            }
        }
    }
}

#[test]
fn triangle_trees_and_pendant() {
    let k3 = Pattern::from_shorthand("K3").unwrap();
    for n in 3..=7 {
        let res = exact(n, &k3);
        assert_eq!(res.value, n as u64 - 1);
        // n - 1 edges and percolating for K3 means connected, i.e. a tree
        assert!(is_weakly_saturated(&res.witness, &k3).unwrap());
    }
    let tp = Pattern::from_shorthand("triangle+pendant").unwrap();
    for n in 4..=5 {
        assert_eq!(exact(n, &tp).value, 3);
    }
}

#[test]
fn exact_matches_upper_where_both_finish() {
    for (n, name) in [(4, "K3"), (7, "K3"), (6, "K4"), (6, "triangle+pendant"), (6, "K4^3"), (5, "K3^3"), (5, "edge^2")] {
        let h = Pattern::from_shorthand(name).unwrap();
        let e = exact(n, &h).value;
        let u = wsat_upper(n, &h).unwrap();
        assert!(e <= u.value, "{name} on {n}");
        assert_eq!(e, u.value, "{name} on {n}: upper from {}", u.source);
    }
}

#[test]
fn pruning_is_transparent() {
    for (n, name) in [(5, "K3"), (5, "K4"), (5, "K5"), (5, "triangle+pendant"), (5, "K4^3"), (6, "K3"), (6, "K4")] {
        let h = Pattern::from_shorthand(name).unwrap();
        let on = wsat_exact(n, &h, &SolverOptions::default()).unwrap();
        let off = wsat_exact(n, &h, &SolverOptions { iso_pruning: false, ..Default::default() }).unwrap();
        assert_eq!(on.exact().unwrap().witness, off.exact().unwrap().witness, "{name} on {n}");
    }
}

#[test]
fn padding_inequality_with_exact_values() {
    for (name, k1, k2) in [("K3", 3, 1), ("K3", 3, 3), ("K3", 4, 2), ("K4", 4, 1), ("K4", 4, 2), ("K4^3", 4, 1), ("K4", 5, 1)] {
        let h = Pattern::from_shorthand(name).unwrap();
        let (r, hv, s) = (h.r() as u64, h.h() as u64, h.s());
        let slack = r * hv.pow(h.r()) * (k1 as u64).pow(s - 2) * k2 as u64;
        let lhs = exact(k1 + k2, &h).value;
        let rhs = exact(k1, &h).value + slack;
        assert!(lhs <= rhs, "{name} ({k1}, {k2}): {lhs} > {rhs}");
    }
}
