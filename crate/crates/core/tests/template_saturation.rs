use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsat_core::percolation::{is_weakly_saturated, verify_certificate, verify_template_certificate};
use wsat_core::templates::{template_cert_to_pattern_cert, template_cert_to_pattern_cert_shuffled, template_closure};
use wsat_core::{EdgeUniverse, Hypergraph, Pattern};

fn random_graph(rng: &mut ChaCha8Rng, n: u32, r: u32, p: f64) -> Hypergraph {
    let universe = EdgeUniverse::new(n, r).unwrap();
    Hypergraph::new(n, r, universe.edges().filter(|_| rng.gen_bool(p))).unwrap()
}

fn random_pattern(rng: &mut ChaCha8Rng, min_s: u32) -> Pattern {
    loop {
        let r = rng.gen_range(2..=3);
        let h = rng.gen_range(r + 1..=5);
        let g = random_graph(rng, h, r, 0.7);
        if let Ok(p) = Pattern::new(g) {
            if p.s() >= min_s {
                return p;
            }
        }
    }
}

#[test]
fn template_percolation_transfers_to_pattern() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut percolated = 0;
    for _ in 0..40 {
        let h = random_pattern(&mut rng, 2);
        let n = rng.gen_range(h.h()..=h.h() + 2);
        let p = rng.gen_range(0.5..0.9);
        let g = random_graph(&mut rng, n, h.r(), p);
        let run = template_closure(&g, h.h(), h.s()).unwrap();
        verify_template_certificate(&g, h.h(), h.s(), &run.certificate).unwrap();
        if !run.percolated {
            continue;
        }
        percolated += 1;
        let cert = template_cert_to_pattern_cert(&run.certificate, &h).unwrap();
        assert!(verify_certificate(&g, &h, &cert).unwrap().complete, "{g:?} under {h:?}");
        let shuffled = template_cert_to_pattern_cert_shuffled(&run.certificate, &h, &mut rng).unwrap();
        assert!(verify_certificate(&g, &h, &shuffled).unwrap().complete);
        assert!(is_weakly_saturated(&g, &h).unwrap());
    }
    assert!(percolated >= 10, "only {percolated} percolating samples");
}

#[test]
fn template_closure_sits_inside_pattern_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..30 {
        let h = random_pattern(&mut rng, 2);
        let n = rng.gen_range(h.h()..=h.h() + 2);
        let p = rng.gen_range(0.3..0.8);
        let g = random_graph(&mut rng, n, h.r(), p);
        let small = template_closure(&g, h.h(), h.s()).unwrap().closure;
        let large = wsat_core::percolation::closure(&g, &h).unwrap().closure;
        assert!(small.edges().all(|e| large.contains(e)));
    }
}

#[test]
fn sparseness_one_with_a_clique_percolates() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut seen = 0;
    while seen < 10 {
        let h = random_pattern(&mut rng, 1);
        if h.s() != 1 {
            continue;
        }
        seen += 1;
        let n = h.h() + rng.gen_range(0..3);
        let clique = Hypergraph::complete(h.h(), h.r()).unwrap().with_vertex_count(n).unwrap();
        let g = clique.with_edges(random_graph(&mut rng, n, h.r(), 0.2).edges().cloned()).unwrap();
        assert!(is_weakly_saturated(&g, &h).unwrap(), "{g:?} under {h:?}");
    }
}
