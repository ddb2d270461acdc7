//! Global sections as an R-bimodule, localization back to a sheaf, and the translation T̂_s.

use crate::coxeter::CoxeterGroup;
use crate::error::{Error, Result};
use crate::polyalg::graded::{elem_is_zero, elem_scale, span_in_degree, spans_freely, SpanSolver};
use crate::polyalg::{Ambient, Poly, PolyMatrix, Scalar};
use crate::sheaf::ops::{default_window, section_generators, Section};
use crate::sheaf::{MomentGraph, Sheaf, SheafMorphism};
use std::sync::Arc;

/// A graded R-module given by generators with coordinates in ⊕_z A_z.
#[derive(Clone, Debug)]
pub struct Presented {
    pub graph: Arc<MomentGraph>,
    pub coords: Vec<Ambient>,
    pub gens: Vec<(i32, Section)>,
}

/// Γ(F) with its left (diagonal) and right (twisted) R-actions.
#[derive(Clone, Debug)]
pub struct SectionsBimodule {
    pub sheaf: Sheaf,
    pub group: Arc<CoxeterGroup>,
    pub gens: Vec<(i32, Section)>,
}

impl SectionsBimodule {
    pub fn new(f: &Sheaf, group: &Arc<CoxeterGroup>) -> Result<SectionsBimodule> {
        let (lo, hi) = default_window(f);
        let gens = section_generators(f, &f.graph.all(), lo, hi)?;
        Ok(SectionsBimodule {
            sheaf: f.clone(),
            group: group.clone(),
            gens,
        })
    }

    pub fn left(&self, m: &Section, r: &Poly) -> Section {
        m.iter().map(|v| elem_scale(v, r)).collect()
    }

    /// (m·r)_z = m_z · z(r).
    pub fn right(&self, m: &Section, r: &Poly) -> Section {
        m.iter()
            .enumerate()
            .map(|(z, v)| elem_scale(v, &self.group.act(z, r)))
            .collect()
    }

    pub fn presented(&self) -> Presented {
        let f = &self.sheaf;
        Presented {
            graph: f.graph.clone(),
            coords: (0..f.graph.len()).map(|z| f.stalk_ambient(z)).collect(),
            gens: self.gens.clone(),
        }
    }

    fn flat(&self, m: &Section) -> Vec<Poly> {
        m.iter().flatten().cloned().collect()
    }

    /// Whether m lies in the left R-span of the generators.
    pub fn contains(&self, m: &Section, d: i32) -> bool {
        let f = &self.sheaf;
        let shifts: Vec<i32> = f.stalks.iter().flatten().copied().collect();
        let amb = Ambient::free(f.nvars(), &shifts);
        let gens = self.gens.iter().map(|(e, s)| (*e, self.flat(s))).collect();
        SpanSolver::new(amb, gens).contains(&self.flat(m), d)
    }
}

/// A sheaf obtained by localization, remembering its stalk generators as coordinate vectors.
#[derive(Clone, Debug)]
pub struct Localized {
    pub sheaf: Sheaf,
    pub coords: Vec<Ambient>,
    pub stalk_gens: Vec<Vec<(i32, Vec<Poly>)>>,
    solvers: Vec<SpanSolver>,
}

impl Localized {
    /// Coefficients of a coordinate vector at z in the stalk basis.
    pub fn express(&self, z: usize, v: &[Poly], d: i32) -> Result<Vec<Poly>> {
        self.solvers[z].express(v, d).ok_or_else(|| {
            Error::LiftFailure(format!(
                "element outside the stalk at {}",
                self.sheaf.graph.vertices[z].id
            ))
        })
    }
}

/// Stalks are the images of the coordinate projections; edge data are read off from global lifts.
pub fn localize(p: &Presented) -> Result<Localized> {
    let g = &p.graph;
    let n = g.nvars();
    let mut order: Vec<usize> = (0..p.gens.len()).collect();
    order.sort_by_key(|&k| (p.gens[k].0, k));
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    let mut stalk_gens = Vec::new();
    for z in 0..g.len() {
        let amb = &p.coords[z];
        let mut pick: Vec<usize> = Vec::new();
        let mut gens: Vec<(i32, Vec<Poly>)> = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let d = p.gens[order[i]].0;
            let mut ech = span_in_degree(amb, &gens, d);
            while i < order.len() && p.gens[order[i]].0 == d {
                let k = order[i];
                let v = amb.reduce(&p.gens[k].1[z]);
                if !elem_is_zero(&v) && ech.insert(&amb.encode(&v, d)).is_ok() {
                    pick.push(k);
                    gens.push((d, v));
                }
                i += 1;
            }
        }
        if let (Some(lo), Some(hi)) = (
            gens.iter().map(|g| g.0).min(),
            gens.iter().map(|g| g.0).max(),
        ) {
            if !spans_freely(amb, &gens, lo, hi + 4) {
                return Err(Error::NotFreeInWindow(format!(
                    "localized stalk at {}",
                    g.vertices[z].id
                )));
            }
        }
        chosen.push(pick);
        stalk_gens.push(gens);
    }
    let solvers: Vec<SpanSolver> = (0..g.len())
        .map(|z| SpanSolver::new(p.coords[z].clone(), stalk_gens[z].clone()))
        .collect();
    let stalks: Vec<Vec<i32>> = stalk_gens
        .iter()
        .map(|gs| gs.iter().map(|(d, _)| -d).collect())
        .collect();
    let express = |z: usize, k: usize| -> Result<Vec<Poly>> {
        let (d, s) = &p.gens[k];
        solvers[z].express(&s[z], *d).ok_or_else(|| {
            Error::LiftAmbiguous(format!(
                "generator {k} is not in the span of the stalk at {}",
                g.vertices[z].id
            ))
        })
    };
    let mut rho = Vec::new();
    for (e, ed) in g.edges.iter().enumerate() {
        let (x, y) = (ed.lower, ed.upper);
        let ann = g.annihilator(e);
        let cols: Vec<Vec<Poly>> = chosen[x]
            .iter()
            .map(|&k| express(y, k))
            .collect::<Result<_>>()?;
        let m = PolyMatrix::from_columns(stalks[y].len(), n, &cols).map(|q| ann.reduce(q));
        for k in 0..p.gens.len() {
            let cx = express(x, k)?;
            let lhs = express(y, k)?;
            let rhs = m.apply(&cx);
            if lhs
                .iter()
                .zip(&rhs)
                .any(|(a, b)| !ann.reduce(&a.sub(b)).is_zero())
            {
                return Err(Error::LiftAmbiguous(format!(
                    "edge {}—{}",
                    g.vertices[x].id, g.vertices[y].id
                )));
            }
        }
        rho.push(m);
    }
    let sheaf = Sheaf::standard(g.clone(), stalks, rho);
    Ok(Localized {
        sheaf,
        coords: p.coords.clone(),
        stalk_gens,
        solvers,
    })
}

/// T̂_s F with the data needed to translate morphisms: stalk at z sits in F^z ⊕ F^{zs}.
#[derive(Clone, Debug)]
pub struct Translated {
    pub s: usize,
    pub source: Sheaf,
    pub loc: Localized,
}

impl Translated {
    pub fn sheaf(&self) -> &Sheaf {
        &self.loc.sheaf
    }
}

fn half_root(group: &CoxeterGroup, s: usize) -> Poly {
    group
        .realization
        .root_poly(s)
        .scale(&Scalar::from_i64(2).inv().unwrap())
}

/// N = Γ(F) ⊗_{R^s} R, generated by m⊗1 and m⊗δ with δ = α_s/2; localized.
pub fn translate(f: &Sheaf, group: &Arc<CoxeterGroup>, s: usize) -> Result<Translated> {
    let g = &f.graph;
    let m = SectionsBimodule::new(f, group)?;
    let delta = half_root(group, s);
    let partner: Vec<usize> = (0..g.len()).map(|z| group.mul_right(z, s)).collect();
    let coords: Vec<Ambient> = (0..g.len())
        .map(|z| {
            let sh: Vec<i32> = f.stalks[z]
                .iter()
                .chain(&f.stalks[partner[z]])
                .copied()
                .collect();
            Ambient::free(f.nvars(), &sh)
        })
        .collect();
    let mut gens = Vec::new();
    for (e, sec) in &m.gens {
        let pair = |z: usize, c: &Poly| -> Vec<Poly> {
            sec[z]
                .iter()
                .chain(&sec[partner[z]])
                .map(|p| p.mul(c))
                .collect()
        };
        let one = Poly::one(f.nvars());
        gens.push((*e, (0..g.len()).map(|z| pair(z, &one)).collect()));
        gens.push((
            e + 2,
            (0..g.len())
                .map(|z| pair(z, &group.act(z, &delta)))
                .collect(),
        ));
    }
    let loc = localize(&Presented {
        graph: g.clone(),
        coords,
        gens,
    })?;
    Ok(Translated {
        s,
        source: f.clone(),
        loc,
    })
}

/// T̂_s φ for φ: F → G, componentwise (u, v) ↦ (φ^z u, φ^{zs} v).
pub fn translate_morphism(
    phi: &SheafMorphism,
    tf: &Translated,
    tg: &Translated,
    group: &CoxeterGroup,
) -> Result<SheafMorphism> {
    let g = &tf.source.graph;
    let n = g.nvars();
    let mut mats = Vec::new();
    for z in 0..g.len() {
        let zs = group.mul_right(z, tf.s);
        let rf = tf.source.rank(z);
        let cols = tf.loc.stalk_gens[z]
            .iter()
            .map(|(d, v)| {
                let mut img = phi.vertex[z].apply(&v[..rf]);
                img.extend(phi.vertex[zs].apply(&v[rf..]));
                tg.loc.express(z, &img, d + phi.degree)
            })
            .collect::<Result<Vec<_>>>()?;
        mats.push(PolyMatrix::from_columns(tg.sheaf().rank(z), n, &cols));
    }
    Ok(SheafMorphism::from_vertices(
        tf.sheaf(),
        tg.sheaf(),
        phi.degree,
        mats,
    ))
}

/// unit: F → T̂_s F of degree 2, m ↦ (z(α_s) m, 0) at z.
pub fn unit(tf: &Translated, group: &CoxeterGroup) -> Result<SheafMorphism> {
    let f = &tf.source;
    let n = f.nvars();
    let alpha = group.realization.root_poly(tf.s);
    let mut mats = Vec::new();
    for z in 0..f.graph.len() {
        let za = group.act(z, &alpha);
        let zs = group.mul_right(z, tf.s);
        let cols = (0..f.rank(z))
            .map(|j| {
                let mut v = vec![Poly::zero(n); f.rank(z) + f.rank(zs)];
                v[j] = za.clone();
                tf.loc.express(z, &v, 2 - f.stalks[z][j])
            })
            .collect::<Result<Vec<_>>>()?;
        mats.push(PolyMatrix::from_columns(tf.sheaf().rank(z), n, &cols));
    }
    Ok(SheafMorphism::from_vertices(f, tf.sheaf(), 2, mats))
}

/// mult: T̂_s F → F of degree 0, (u, v) ↦ u.
pub fn mult(tf: &Translated) -> SheafMorphism {
    let f = &tf.source;
    let n = f.nvars();
    let mats = (0..f.graph.len())
        .map(|z| {
            let cols: Vec<Vec<Poly>> = tf.loc.stalk_gens[z]
                .iter()
                .map(|(_, v)| v[..f.rank(z)].to_vec())
                .collect();
            PolyMatrix::from_columns(f.rank(z), n, &cols)
        })
        .collect();
    SheafMorphism::from_vertices(tf.sheaf(), f, 0, mats)
}

/// Determinant of a small square polynomial matrix.
pub fn det(m: &PolyMatrix) -> Poly {
    assert_eq!(m.rows, m.cols);
    fn rec(m: &PolyMatrix, rows: &[usize], col: usize) -> Poly {
        if rows.is_empty() {
            return Poly::one(m.nvars);
        }
        let mut acc = Poly::zero(m.nvars);
        for (i, &r) in rows.iter().enumerate() {
            let e = m.get(r, col);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = rows.iter().copied().filter(|&q| q != r).collect();
            let t = e.mul(&rec(m, &rest, col + 1));
            acc = if i % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        acc
    }
    rec(m, &(0..m.rows).collect::<Vec<_>>(), 0)
}

/// Whether every vertex component is invertible over R (determinant a nonzero constant).
pub fn is_vertexwise_iso(phi: &SheafMorphism) -> bool {
    phi.vertex.iter().all(|m| {
        m.rows == m.cols && {
            let d = det(m);
            m.rows == 0 || (d.degree() == Some(0) && !d.is_zero())
        }
    })
}
