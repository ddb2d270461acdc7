//! JSON artifacts, CSV export and the plain-text sheaf picture.

use super::RunConfig;
use crate::error::{Error, Result};
use crate::homotopy::complex::Block;
use crate::homotopy::{BmpComplex, BmpCtx, Complex, Label};
use crate::sheaf::sheaf::{matrix_from_strings, matrix_to_strings};
use crate::sheaf::Sheaf;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub vertex: String,
    pub shift: i32,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry {
    /// source cohomological degree
    pub degree: i32,
    pub row: usize,
    pub col: usize,
    /// vertex name → polynomial matrix of the component there
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub lo: i32,
    pub terms: Vec<Vec<TermEntry>>,
    pub differential: Vec<DiffEntry>,
}

impl ComplexJson {
    pub fn from_complex(ctx: &BmpCtx, c: &BmpComplex) -> ComplexJson {
        let g = ctx.cat.graph();
        let terms = c
            .terms
            .iter()
            .map(|t| {
                let mut out: Vec<TermEntry> = Vec::new();
                for &(x, a) in t {
                    match out.last_mut() {
                        Some(e) if e.vertex == g.vertices[x].id && e.shift == a => e.mult += 1,
                        _ => out.push(TermEntry {
                            vertex: g.vertices[x].id.clone(),
                            shift: a,
                            mult: 1,
                        }),
                    }
                }
                out
            })
            .collect();
        let mut differential = Vec::new();
        for (k, b) in c.d.iter().enumerate() {
            for (row, col, m) in b.entries() {
                let matrices = (0..g.len())
                    .filter(|&x| !m.vertex[x].is_zero())
                    .map(|x| {
                        (
                            g.vertices[x].id.clone(),
                            matrix_to_strings(&m.vertex[x], &g.vars),
                        )
                    })
                    .collect();
                differential.push(DiffEntry {
                    degree: c.lo + k as i32,
                    row,
                    col,
                    matrices,
                });
            }
        }
        ComplexJson {
            lo: c.lo,
            terms,
            differential,
        }
    }

    pub fn to_complex(&self, ctx: &BmpCtx) -> Result<BmpComplex> {
        let g = ctx.cat.graph();
        let look = |s: &str| {
            g.vertex(s)
                .ok_or_else(|| Error::Validation(format!("unknown vertex {s:?}")))
        };
        let mut terms: BTreeMap<i32, Vec<Label>> = BTreeMap::new();
        for (k, t) in self.terms.iter().enumerate() {
            let mut labels = Vec::new();
            for e in t {
                let x = look(&e.vertex)?;
                labels.extend(std::iter::repeat_n((x, e.shift), e.mult));
            }
            terms.insert(self.lo + k as i32, labels);
        }
        let empty = Vec::new();
        let mut d: BTreeMap<i32, Block<_>> = BTreeMap::new();
        for e in &self.differential {
            let src = terms.get(&e.degree).unwrap_or(&empty);
            let tgt = terms.get(&(e.degree + 1)).unwrap_or(&empty);
            if e.col >= src.len() || e.row >= tgt.len() {
                return Err(Error::Validation(format!(
                    "differential entry ({}, {}) out of range in degree {}",
                    e.row, e.col, e.degree
                )));
            }
            let (sl, tl) = (src[e.col], tgt[e.row]);
            let (sx, tx) = (ctx.object(sl.0), ctx.object(tl.0));
            let mut comps = Vec::new();
            for (v, rows) in &e.matrices {
                let x = look(v)?;
                comps.push((x, matrix_from_strings(rows, tx.rank(x), sx.rank(x), g)?));
            }
            let m = ctx.arrow_between(sl, tl, &comps);
            d.entry(e.degree)
                .or_insert_with(|| Block::zero(tgt.len(), src.len()))
                .set(e.row, e.col, Some(m));
        }
        let c = Complex::from_parts(terms, d);
        crate::homotopy::Ops(ctx)
            .check_d2(&c)
            .map_err(|e| Error::Validation(e.to_string()))?;
        Ok(c)
    }
}

/// One row of a Hom table: dim Hom(C, D[shift]) in internal degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomRow {
    pub shift: i32,
    pub degree: i32,
    pub dim: usize,
}

/// The payload of a written artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Graph {
        graph: serde_json::Value,
    },
    Sheaf {
        top: String,
        sheaf: serde_json::Value,
    },
    Complex {
        name: String,
        complex: ComplexJson,
    },
    Hom {
        source: String,
        target: String,
        rows: Vec<HomRow>,
    },
    Report {
        suite: String,
        passed: bool,
        cases: Vec<super::suites::Case>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub version: String,
    pub config: RunConfig,
    #[serde(flatten)]
    pub payload: Payload,
}

impl Artifact {
    pub fn new(config: &RunConfig, payload: Payload) -> Artifact {
        Artifact {
            version: VERSION.to_string(),
            config: config.clone(),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Artifact> {
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("not a momix artifact: {e}")))
    }
}

/// Σ v^e over generator degrees e, as text.
pub fn hilbert_numerator(degrees: &[i32]) -> String {
    let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
    for &e in degrees {
        *counts.entry(e).or_default() += 1;
    }
    if counts.is_empty() {
        return "0".into();
    }
    counts
        .iter()
        .map(|(&e, &c)| {
            let mono = match e {
                0 => String::new(),
                1 => "v".into(),
                _ => format!("v^{e}"),
            };
            match (c, mono.is_empty()) {
                (1, true) => "1".into(),
                (1, false) => mono,
                (_, true) => c.to_string(),
                (_, false) => format!("{c}{mono}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn stalk_csv(sheaf: &Sheaf) -> String {
    let mut out = String::from("vertex,hilbert_numerator\n");
    for (x, v) in sheaf.graph.vertices.iter().enumerate() {
        out += &format!(
            "{},{}\n",
            v.id,
            hilbert_numerator(&sheaf.stalk_generator_degrees(x))
        );
    }
    out
}

fn module(shifts: &[i32], ann: Option<&str>) -> String {
    if shifts.is_empty() {
        return "0".into();
    }
    let base = match ann {
        Some(a) => format!("R/({a})"),
        None => "R".into(),
    };
    shifts
        .iter()
        .map(|n| format!("{base}{{{n}}}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Vertices from the top down, each followed by the edges hanging below it.
pub fn pretty(sheaf: &Sheaf) -> String {
    let g = &sheaf.graph;
    let mut out = String::new();
    for x in g.linear_extension().into_iter().rev() {
        out += &format!("{}: {}\n", g.vertices[x].id, module(&sheaf.stalks[x], None));
        for &k in g.down_edges(x) {
            let ed = &g.edges[k];
            let label = ed.label.to_string_with(&g.vars);
            out += &format!(
                "  | {}-{}: {}\n",
                g.vertices[ed.lower].id,
                g.vertices[ed.upper].id,
                module(&sheaf.edges[k].shifts, Some(&label))
            );
        }
    }
    out
}

fn csv_cell(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV table of an artifact; artifacts without rows give just the header.
pub fn to_csv(a: &Artifact) -> Result<String> {
    Ok(match &a.payload {
        Payload::Sheaf { sheaf, .. } => stalk_csv(&Sheaf::from_json(&sheaf.to_string())?),
        Payload::Hom { rows, .. } => {
            let mut out = String::from("shift,degree,dim\n");
            for r in rows {
                out += &format!("{},{},{}\n", r.shift, r.degree, r.dim);
            }
            out
        }
        Payload::Complex { complex, .. } => {
            let mut out = String::from("degree,vertex,shift,mult\n");
            for (k, t) in complex.terms.iter().enumerate() {
                for e in t {
                    out += &format!(
                        "{},{},{},{}\n",
                        complex.lo + k as i32,
                        e.vertex,
                        e.shift,
                        e.mult
                    );
                }
            }
            out
        }
        Payload::Report { suite, cases, .. } => {
            let mut out = String::from("suite,case,passed,detail\n");
            for c in cases {
                out += &format!(
                    "{},{},{},{}\n",
                    csv_cell(suite),
                    csv_cell(&c.name),
                    c.passed,
                    csv_cell(&c.detail)
                );
            }
            out
        }
        Payload::Graph { graph } => {
            let mut out = String::from("lower,upper,label\n");
            for e in graph
                .get("edges")
                .and_then(|e| e.as_array())
                .into_iter()
                .flatten()
            {
                let f = |k: &str| e.get(k).and_then(|v| v.as_str()).unwrap_or("").to_string();
                out += &format!(
                    "{},{},{}\n",
                    csv_cell(&f("u")),
                    csv_cell(&f("v")),
                    csv_cell(&f("label"))
                );
            }
            out
        }
    })
}

/// Plain-text rendering: the stalk/edge picture for sheaves, term lists otherwise.
pub fn to_text(a: &Artifact) -> Result<String> {
    Ok(match &a.payload {
        Payload::Sheaf { sheaf, .. } => pretty(&Sheaf::from_json(&sheaf.to_string())?),
        Payload::Complex { complex, .. } => {
            let mut out = String::new();
            for (k, t) in complex.terms.iter().enumerate() {
                let parts: Vec<String> = t
                    .iter()
                    .map(|e| {
                        if e.mult == 1 {
                            format!("E_{}{{{}}}", e.vertex, e.shift)
                        } else {
                            format!("E_{}{{{}}}^{}", e.vertex, e.shift, e.mult)
                        }
                    })
                    .collect();
                out += &format!("{:>3}: {}\n", complex.lo + k as i32, parts.join(" + "));
            }
            out
        }
        _ => to_csv(a)?,
    })
}
