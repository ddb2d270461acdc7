//! Axiom checkers: (BMP1)–(BMP4) on a degree window and condition (V).

use super::ops::{kernel_generators, sections_in_degree, Stack};
use super::sheaf::Sheaf;
use crate::error::Result;
use crate::polyalg::graded::elem_is_zero;
use crate::polyalg::{Ambient, Echelon, Poly};
use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VertexVerdict {
    pub vertex: String,
    pub ok: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BmpReport {
    pub window: (i32, i32),
    pub vertices: Vec<VertexVerdict>,
}

impl BmpReport {
    pub fn passed(&self) -> bool {
        self.vertices.iter().all(|v| v.ok)
    }
}

fn image_echelon(amb: &Ambient, elems: impl Iterator<Item = Vec<Poly>>, d: i32) -> Echelon {
    let mut e = Echelon::new();
    for v in elems {
        if !elem_is_zero(&v) {
            let _ = e.insert(&amb.encode_reduced(&v, d));
        }
    }
    e
}

fn same_span(a: &Echelon, b: &Echelon) -> bool {
    a.rank() == b.rank() && a.rows().all(|r| b.contains(r))
}

/// Checks (BMP1), (BMP2) and im(u_x) = im(d_x) in every degree of the window.
pub fn verify_bmp(f: &Sheaf, lo: i32, hi: i32) -> Result<BmpReport> {
    let g = &f.graph;
    let mut failures: Vec<Vec<String>> = vec![Vec::new(); g.len()];
    if let Err(e) = f.check() {
        failures[0].push(format!("BMP1: {e}"));
    }
    for (k, ed) in g.edges.iter().enumerate() {
        let y = ed.upper;
        let src = f.stalk_ambient(y);
        let tgt = f.edge_ambient(k);
        let rho = f.rho(y, k);
        for d in lo..=hi {
            let imgs = src.basis(d).into_iter().map(|b| rho.apply(&b));
            let rank = image_echelon(&tgt, imgs, d).rank();
            let (sd, td) = (src.dim(d), tgt.dim(d));
            if rank != td {
                failures[y].push(format!(
                    "BMP2: ρ on edge {}—{} not surjective in degree {d}",
                    g.vertices[ed.lower].id, g.vertices[y].id
                ));
                break;
            }
            if sd - rank != src.dim(d - 2) {
                failures[y].push(format!(
                    "BMP2: kernel on edge {}—{} differs from αF in degree {d}",
                    g.vertices[ed.lower].id, g.vertices[y].id
                ));
                break;
            }
        }
    }
    for x in 0..g.len() {
        let ups: Vec<usize> = g.up_edges(x).to_vec();
        let stack = Stack::new(
            f.nvars(),
            &ups.iter().map(|&k| f.edge_ambient(k)).collect::<Vec<_>>(),
        );
        let above = g.strictly_above(x);
        for d in lo..=hi {
            let dx = f.stalk_ambient(x).basis(d).into_iter().map(|m| {
                let mut out = stack.amb.zero_elem();
                for (b, &k) in ups.iter().enumerate() {
                    for (i, p) in f.rho(x, k).apply(&m).into_iter().enumerate() {
                        out[stack.starts[b] + i] = p;
                    }
                }
                out
            });
            let im_d = image_echelon(&stack.amb, dx, d);
            let secs = sections_in_degree(f, &above, d);
            let ux = secs.iter().map(|s| {
                let mut out = stack.amb.zero_elem();
                for (b, &k) in ups.iter().enumerate() {
                    let y = g.edges[k].upper;
                    for (i, p) in f.rho(y, k).apply(&s[y]).into_iter().enumerate() {
                        out[stack.starts[b] + i] = p;
                    }
                }
                out
            });
            let im_u = image_echelon(&stack.amb, ux, d);
            if !same_span(&im_d, &im_u) {
                failures[x].push(format!("BMP3'/BMP4': im(u_x) ≠ im(d_x) in degree {d}"));
                break;
            }
        }
    }
    Ok(BmpReport {
        window: (lo, hi),
        vertices: g
            .vertices
            .iter()
            .zip(failures)
            .map(|(v, fl)| VertexVerdict {
                vertex: v.id.clone(),
                ok: fl.is_empty(),
                failures: fl,
            })
            .collect(),
    })
}

/// A vertex where a family member has a non-free costalk.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VWitness {
    pub member: usize,
    pub vertex: String,
    pub generator_degrees: Vec<i32>,
}

/// Condition (V): every costalk (relative to all upward edges) of every member is free.
pub fn check_v(family: &[Sheaf]) -> Result<Option<VWitness>> {
    for (m, f) in family.iter().enumerate() {
        for s in f.support() {
            let (gens, free) = kernel_generators(f, s, f.graph.up_edges(s))?;
            if !free {
                return Ok(Some(VWitness {
                    member: m,
                    vertex: f.graph.vertices[s].id.clone(),
                    generator_degrees: gens.iter().map(|g| g.0).collect(),
                }));
            }
        }
    }
    Ok(None)
}
