//! Saturation certificates and their text form.
//!
//! ```text
//! CERT pattern 4 2
//! 1 2 | 0 | 0->0 1->1 2->2
//! CERT template 5 3
//! 0 1 4 | 0 | W={0,1,2,3,4} Z={0,1}
//! ```

use std::fmt::{self, Write};

use crate::error::{Error, Result};
use crate::hypercore::{Edge, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    Pattern,
    Template,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::Pattern => "pattern",
            CertificateKind::Template => "template",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An injective map `V(H) -> V(G)`; `mapping[i]` is the image of pattern
/// vertex `i`. `covered_edge` is the added edge, which must be the image of
/// some edge of `H`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub mapping: Vec<Vertex>,
    pub covered_edge: Edge,
}

/// A copy of `T_{r,h,s}` in the host: every r-subset of `w` not containing
/// `z` is present, and the added edge (which contains `z`) is the special edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TemplateCopy {
    pub w: Vec<Vertex>,
    pub z: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    Pattern(Embedding),
    Template(TemplateCopy),
}

impl Witness {
    pub fn kind(&self) -> CertificateKind {
        match self {
            Witness::Pattern(_) => CertificateKind::Pattern,
            Witness::Template(_) => CertificateKind::Template,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: Edge,
    /// Induction measure the step was generated under; 0 when the step
    /// came from the generic engine.
    pub phase_key: u64,
    pub witness: Witness,
}

/// An ordered saturation process over an `n`-vertex, `r`-uniform universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SaturationCertificate {
    pub kind: CertificateKind,
    pub n: u32,
    pub r: u32,
    pub steps: Vec<Step>,
}

impl SaturationCertificate {
    pub fn new(kind: CertificateKind, n: u32, r: u32) -> SaturationCertificate {
        SaturationCertificate { kind, n, r, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.steps.iter().map(|s| &s.edge)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "CERT {} {} {}", self.kind, self.n, self.r).unwrap();
        for step in &self.steps {
            write!(out, "{} | {} | ", step.edge, step.phase_key).unwrap();
            match &step.witness {
                Witness::Pattern(emb) => {
                    for (i, u) in emb.mapping.iter().enumerate() {
                        if i > 0 {
                            out.push(' ');
                        }
                        write!(out, "{i}->{u}").unwrap();
                    }
                }
                Witness::Template(t) => {
                    write!(out, "W={} Z={}", braces(&t.w), braces(&t.z)).unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<SaturationCertificate> {
        let mut cert: Option<SaturationCertificate> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: &str| Error::Parse { line: line_no, message: m.to_string() };
            let Some(c) = cert.as_mut() else {
                let toks: Vec<&str> = line.split_whitespace().collect();
                let [tag, kind, n, r] = toks[..] else {
                    return Err(err("header must be `CERT pattern|template n r`"));
                };
                if tag != "CERT" {
                    return Err(err("header must start with CERT"));
                }
                let kind = match kind {
                    "pattern" => CertificateKind::Pattern,
                    "template" => CertificateKind::Template,
                    _ => return Err(err("certificate kind must be `pattern` or `template`")),
                };
                let n = n.parse().map_err(|_| err("bad vertex count"))?;
                let r = r.parse().map_err(|_| err("bad uniformity"))?;
                cert = Some(SaturationCertificate::new(kind, n, r));
                continue;
            };
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            let [edge_txt, key_txt, wit_txt] = parts[..] else {
                return Err(err("step must be `edge | phase_key | witness`"));
            };
            let verts = parse_list(edge_txt, ' ').ok_or_else(|| err("bad edge"))?;
            let edge = Edge::from_sorted(&verts).map_err(|e| err(&e.to_string()))?;
            let phase_key = key_txt.parse().map_err(|_| err("bad phase key"))?;
            let witness = match c.kind {
                CertificateKind::Pattern => {
                    let mut mapping = Vec::new();
                    for (i, tok) in wit_txt.split_whitespace().enumerate() {
                        let (from, to) = tok.split_once("->").ok_or_else(|| err("mapping entries look like `v->u`"))?;
                        if from.parse::<usize>().ok() != Some(i) {
                            return Err(err("mapping entries must list pattern vertices 0, 1, 2, ... in order"));
                        }
                        mapping.push(to.parse().map_err(|_| err("bad mapped vertex"))?);
                    }
                    Witness::Pattern(Embedding { mapping, covered_edge: edge.clone() })
                }
                CertificateKind::Template => {
                    let (w_txt, z_txt) = wit_txt.split_once(' ').ok_or_else(|| err("witness must be `W={..} Z={..}`"))?;
                    let w = w_txt
                        .trim()
                        .strip_prefix("W=")
                        .and_then(unbrace)
                        .ok_or_else(|| err("bad W set"))?;
                    let z = z_txt
                        .trim()
                        .strip_prefix("Z=")
                        .and_then(unbrace)
                        .ok_or_else(|| err("bad Z set"))?;
                    Witness::Template(TemplateCopy { w, z })
                }
            };
            c.steps.push(Step { edge, phase_key, witness });
        }
        cert.ok_or(Error::Parse { line: 0, message: "missing CERT header".into() })
    }
}

fn braces(v: &[Vertex]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn unbrace(s: &str) -> Option<Vec<Vertex>> {
    let inner = s.strip_prefix('{')?.strip_suffix('}')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    parse_list(inner, ',')
}

fn parse_list(s: &str, sep: char) -> Option<Vec<Vertex>> {
    s.split(sep)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().ok())
        .collect()
}
