use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_rational::Ratio;
use sha2::{Digest, Sha256};
use wsat_core::constructions::{
    clique_extremal, cone_gadget, main_construction, percolate_gadget, s1_construction, spartite_gadget, BoundCheck,
    ConeSpec, MainSpec, PercolateSpec, SpartiteSpec,
};
use wsat_core::designs::{greedy_cover_seeded, parse_cover, rodl_bound, verify_cover, write_cover};
use wsat_core::hypercore::{binomial, parse_hypergraph, write_hypergraph};
use wsat_core::percolation::{
    closure, verify_certificate, verify_template_certificate, CertificateKind, ClosureResult, SaturationCertificate,
};
use wsat_core::solver::{ratio_table, wsat_exact, wsat_upper, SolverOptions, WsatOutcome, MAX_EXACT_EDGES};
use wsat_core::templates::{
    creates_template_copy, ordered_template_process, template, template_cert_to_pattern_cert, template_closure,
    template_minus,
};
use wsat_core::{Edge, Error, Hypergraph, Pattern};

use crate::output::Sink;
use crate::{Cli, Command, Engine, Generate, EXIT_INCONCLUSIVE, EXIT_NEGATIVE};

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Closure { graph, engine } => cmd_closure(cli, graph, engine),
        Command::Generate { kind } => cmd_generate(cli, kind),
        Command::Wsat { operands, exact, upper, table, no_pruning } => {
            let options = SolverOptions { budget: cli.budget, iso_pruning: !no_pruning };
            cmd_wsat(cli, operands, *exact, *upper, table.as_deref(), &options)
        }
        Command::Verify { graph, certificate, engine } => cmd_verify(graph, certificate, engine),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Hypergraph> {
    parse_hypergraph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// A pattern file if `arg` names one, a shorthand otherwise.
fn load_pattern(arg: &str) -> Result<Pattern> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(Pattern::new(load_graph(path)?)?);
    }
    Ok(Pattern::from_shorthand(arg)?)
}

/// First 16 hex digits of the SHA-256 of the pattern's canonical text.
fn pattern_hash(h: &Pattern) -> String {
    let digest = Sha256::digest(write_hypergraph(h.graph()).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn check(sink: &mut Sink, name: &str, ok: bool) -> bool {
    sink.line(format!("#CHECK {name} {}", if ok { "holds" } else { "fails" }));
    ok
}

fn bounds(sink: &mut Sink, bounds: &[BoundCheck]) -> bool {
    for b in bounds {
        sink.line(b.to_string());
    }
    bounds.iter().all(BoundCheck::holds)
}

fn verdict(ok: bool) -> u8 {
    if ok {
        0
    } else {
        EXIT_NEGATIVE
    }
}

fn template_params(engine: &Engine) -> Option<(u32, u32)> {
    engine.template.as_ref().map(|t| (t[0], t[1]))
}

fn cmd_closure(cli: &Cli, graph: &Path, engine: &Engine) -> Result<u8> {
    let g = load_graph(graph)?;
    let run = match (template_params(engine), &engine.pattern) {
        (Some((h, s)), _) => template_closure(&g, h, s)?,
        (None, Some(p)) => closure(&g, &load_pattern(p)?)?,
        (None, None) => bail!("either --pattern or --template is required"),
    };
    let mut sink = Sink::new(cli.output.clone(), "closure")?;
    sink.line(format!("percolated {}", run.percolated));
    sink.line(format!("edges {} {}", g.edge_count(), run.closure.edge_count()));
    sink.line(format!("steps {}", run.certificate.len()));
    sink.artifact("closure.graph", &write_hypergraph(&run.closure))?;
    sink.artifact("closure.cert", &run.certificate.to_text())?;
    sink.finish()?;
    Ok(verdict(run.percolated))
}

fn cmd_verify(graph: &Path, certificate: &Path, engine: &Engine) -> Result<u8> {
    let g = load_graph(graph)?;
    let cert = SaturationCertificate::parse(&read(certificate)?)
        .with_context(|| format!("parsing {}", certificate.display()))?;
    let outcome = match (template_params(engine), &engine.pattern) {
        (Some((h, s)), _) => verify_template_certificate(&g, h, s, &cert),
        (None, Some(p)) => {
            let h = load_pattern(p)?;
            let cert = if cert.kind == CertificateKind::Template { template_cert_to_pattern_cert(&cert, &h)? } else { cert };
            verify_certificate(&g, &h, &cert)
        }
        (None, None) => bail!("either --pattern or --template is required"),
    };
    match outcome {
        Ok(replay) => {
            println!("valid steps {} complete {}", replay.steps, replay.complete);
            Ok(0)
        }
        Err(bad) => {
            println!("invalid {bad}");
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn parse_range(text: &str) -> Result<Vec<u32>> {
    let (a, b) = text.split_once("..").context("range must look like N1..N2")?;
    let (a, b): (u32, u32) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {text}");
    }
    Ok((a..=b).collect())
}

fn cmd_wsat(
    cli: &Cli,
    operands: &[String],
    exact: bool,
    upper: bool,
    table: Option<&str>,
    options: &SolverOptions,
) -> Result<u8> {
    if let Some(range) = table {
        let [pattern] = operands else { bail!("with --table, give only the pattern") };
        let h = load_pattern(pattern)?;
        let rows = ratio_table(&h, &parse_range(range)?, options)?;
        let mut sink = Sink::new(cli.output.clone(), "wsat_table")?;
        sink.line(format!("# pattern {} r {} h {} s {}", pattern_hash(&h), h.r(), h.h(), h.s()));
        sink.line("# n value method ratio");
        for row in rows {
            sink.line(format!("{} {} {} {:.6}", row.n, row.value, row.method.as_str(), row.ratio));
        }
        sink.finish()?;
        return Ok(0);
    }
    let [n, pattern] = operands else { bail!("expected N and PATTERN") };
    let n: u32 = n.parse().with_context(|| format!("N must be a vertex count, got `{n}`"))?;
    let h = load_pattern(pattern)?;
    let hash = pattern_hash(&h);
    let use_exact = exact || (!upper && binomial(n as u64, h.r() as u64) <= MAX_EXACT_EDGES);
    let mut sink = Sink::new(cli.output.clone(), "wsat")?;
    let code = if use_exact {
        match wsat_exact(n, &h, options)? {
            WsatOutcome::Exact(res) => {
                sink.line(format!("wsat {n} {} {hash} {} exact", h.r(), res.value));
                sink.line(format!("# explored {}", res.explored));
                sink.artifact("wsat.graph", &write_hypergraph(&res.witness))?;
                sink.artifact("wsat.cert", &res.certificate.to_text())?;
                0
            }
            out @ WsatOutcome::Inconclusive { lower_bound, explored } => {
                sink.line(format!("wsat {n} {} {hash} {lower_bound} inconclusive", h.r()));
                sink.line(format!("# {out}"));
                sink.line(format!("# explored {explored}"));
                EXIT_INCONCLUSIVE
            }
        }
    } else {
        let ub = wsat_upper(n, &h)?;
        sink.line(format!("wsat {n} {} {hash} {} upper", h.r(), ub.value));
        sink.line(format!("# source {}", ub.source));
        sink.artifact("wsat.graph", &write_hypergraph(&ub.witness))?;
        0
    };
    sink.finish()?;
    Ok(code)
}

/// Template closure plus the proof-order process; returns the certificate
/// to publish and whether both succeeded.
fn gadget_checks(
    sink: &mut Sink,
    g: &Hypergraph,
    h: u32,
    s: u32,
    key: impl Fn(&Edge) -> u64,
) -> Result<(SaturationCertificate, bool)> {
    let run: ClosureResult = template_closure(g, h, s)?;
    let a = check(sink, "template_closure_percolates", run.percolated);
    let ordered = ordered_template_process(g, h, s, key);
    let b = check(sink, "ordered_template_process", ordered.is_ok());
    Ok((ordered.unwrap_or(run.certificate), a && b))
}

fn cmd_generate(cli: &Cli, kind: &Generate) -> Result<u8> {
    let out = cli.output.clone();
    let ok = match kind {
        Generate::Template { r, h, s } => {
            let (t, f) = template(*r, *h, *s)?;
            let minus = template_minus(*r, *h, *s)?;
            let mut sink = Sink::new(out, "template")?;
            sink.line(format!("edges {}", t.edge_count()));
            sink.line(format!("special {f}"));
            let ok = check(&mut sink, "special_edge_completes_template", creates_template_copy(&minus, &f, *h, *s)?.is_some());
            sink.artifact("template.graph", &write_hypergraph(&t))?;
            sink.artifact("template_minus.graph", &write_hypergraph(&minus))?;
            sink.finish()?;
            ok
        }
        Generate::Cone { r, h, s, a, b } => {
            let spec = ConeSpec { r: *r, h: *h, s: *s, size_a: *a, size_b: *b };
            let c = cone_gadget(&spec)?;
            let mut sink = Sink::new(out, "cone")?;
            sink.line(format!("edges {}", c.graph.edge_count()));
            let (cert, ok) = gadget_checks(&mut sink, &c.graph, *h, *s, spec.phase_key())?;
            let ok = bounds(&mut sink, &c.bounds) && ok;
            sink.artifact("cone.graph", &write_hypergraph(&c.graph))?;
            sink.artifact("cone.cert", &cert.to_text())?;
            sink.finish()?;
            ok
        }
        Generate::Spartite { r, h, s, parts } => {
            let spec = SpartiteSpec { r: *r, h: *h, s: *s, part_sizes: parts.clone() };
            let c = spartite_gadget(&spec)?;
            let mut sink = Sink::new(out, "spartite")?;
            sink.line(format!("edges {}", c.graph.edge_count()));
            let (cert, ok) = gadget_checks(&mut sink, &c.graph, *h, *s, spec.phase_key())?;
            let ok = bounds(&mut sink, &c.bounds) && ok;
            sink.artifact("spartite.graph", &write_hypergraph(&c.graph))?;
            sink.artifact("spartite.cert", &cert.to_text())?;
            sink.finish()?;
            ok
        }
        Generate::Percolate { r, s, h, l, t } => {
            let spec = PercolateSpec { r: *r, h: *h, s: *s, clusters: *l, cluster_size: *t };
            let gadget = percolate_gadget(&spec)?;
            let g = gadget.graph()?;
            let mut sink = Sink::new(out, "percolate")?;
            sink.line(format!("edges {} e1 {} e2 {}", g.edge_count(), gadget.e1.len(), gadget.e2.len()));
            let (cert, ok) = gadget_checks(&mut sink, &g, *h, *s, spec.phase_key())?;
            let ok = bounds(&mut sink, &gadget.bounds) && ok;
            let e1 = Hypergraph::new(spec.n(), *r, gadget.e1.iter().cloned())?;
            let e2 = Hypergraph::new(spec.n(), *r, gadget.e2.iter().cloned())?;
            sink.artifact("percolate_e1.graph", &write_hypergraph(&e1))?;
            sink.artifact("percolate_e2.graph", &write_hypergraph(&e2))?;
            sink.artifact("percolate.graph", &write_hypergraph(&g))?;
            sink.artifact("percolate.cert", &cert.to_text())?;
            sink.finish()?;
            ok
        }
        Generate::S1 { pattern, n } => {
            let h = load_pattern(pattern)?;
            let g = s1_construction(&h, *n)?;
            let run = closure(&g, &h)?;
            let mut sink = Sink::new(out, "s1")?;
            sink.line(format!("edges {}", g.edge_count()));
            let ok = check(&mut sink, "percolates", run.percolated);
            sink.artifact("s1.graph", &write_hypergraph(&g))?;
            sink.artifact("s1.cert", &run.certificate.to_text())?;
            sink.finish()?;
            ok
        }
        Generate::Main { pattern, n, m, base, cover, eps } => {
            let h = load_pattern(pattern)?;
            let base = match (base, m) {
                (Some(path), _) => load_graph(path)?,
                (None, Some(m)) => clique_extremal(*m, h.h(), h.r())?,
                (None, None) => bail!("either --m or --base is required"),
            };
            let cover = cover.as_deref().map(|p| Ok::<_, anyhow::Error>(parse_cover(&read(p)?)?)).transpose()?;
            let eps: Ratio<u128> = eps.parse().map_err(|_| anyhow::anyhow!("--eps must look like p/q, got `{eps}`"))?;
            let spec = MainSpec { pattern: h, n: *n, base, cover, eps, seed: cli.seed };
            let mut sink = Sink::new(out, "main")?;
            match main_construction(&spec) {
                Err(Error::Invariant(msg)) => {
                    check(&mut sink, &msg.replace(' ', "_"), false);
                    sink.finish()?;
                    false
                }
                Err(e) => return Err(e.into()),
                Ok(c) => {
                    sink.line(format!("m1 {} m {}", c.m1, c.m));
                    sink.line(format!("clusters {} cluster_size {} block_size {}", c.clusters, c.cluster_size, c.block_size));
                    sink.line(format!("blocks {} sampled {}", c.cover.blocks.len(), c.cover.sampled));
                    sink.line(format!("edges {} copies {} e2 {}", c.graph.edge_count(), c.copies_edges, c.e2_edges));
                    let ok = bounds(&mut sink, &c.bounds);
                    for (name, value) in &c.ratios {
                        sink.line(format!("#RATIO {name} {value:.6}"));
                    }
                    let ok = check(&mut sink, "percolates", c.percolation.percolated) && ok;
                    sink.artifact("main.graph", &write_hypergraph(&c.graph))?;
                    sink.artifact("main.cover", &write_cover(&c.cover))?;
                    sink.artifact("main.cert", &c.percolation.certificate.to_text())?;
                    sink.finish()?;
                    ok
                }
            }
        }
        Generate::CliqueExtremal { n, t, r } => {
            let g = clique_extremal(*n, *t, *r)?;
            let h = Pattern::new(Hypergraph::complete(*t, *r)?)?;
            let run = closure(&g, &h)?;
            let formula = binomial(*n as u64, *r as u64) - binomial((n - t + r) as u64, *r as u64);
            let mut sink = Sink::new(out, "clique_extremal")?;
            sink.line(format!("edges {}", g.edge_count()));
            let ok = bounds(&mut sink, &[BoundCheck::new("clique_wsat_value", g.edge_count() as u128, formula as u128)]);
            let ok = check(&mut sink, "percolates", run.percolated) && ok;
            sink.artifact("clique_extremal.graph", &write_hypergraph(&g))?;
            sink.artifact("clique_extremal.cert", &run.certificate.to_text())?;
            sink.finish()?;
            ok
        }
        Generate::Cover { n, k, t } => {
            let d = greedy_cover_seeded(*n, *k, *t, cli.seed)?;
            let bound = rodl_bound(*n, *k, *t, Ratio::from_integer(0));
            let mut sink = Sink::new(out, "cover")?;
            sink.line(format!("blocks {} sampled {}", d.blocks.len(), d.sampled));
            sink.line(format!(
                "#RATIO cover_vs_design_bound {:.6}",
                d.blocks.len() as f64 * *bound.denom() as f64 / *bound.numer() as f64
            ));
            let ok = check(&mut sink, "verify_cover", verify_cover(&d));
            sink.artifact("cover.cover", &write_cover(&d))?;
            sink.finish()?;
            ok
        }
    };
    Ok(verdict(ok))
}
