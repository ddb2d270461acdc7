//! Degreewise Hom spaces between sheaves.

use super::sheaf::{Sheaf, SheafMorphism};
use crate::error::Result;
use crate::polyalg::graded::{kernel_in_degree_fn, minimal_generators, spans_freely, Comp};
use crate::polyalg::{Ambient, Poly, PolyMatrix};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug)]
enum Slot {
    Vertex(usize, usize, usize),
    Edge(usize, usize, usize),
}

/// The linear system "ρ∘φ^x = φ^E∘ρ" for morphisms F → G over a region.
pub struct HomSystem<'a> {
    src: &'a Sheaf,
    tgt: &'a Sheaf,
    region: Vec<bool>,
    fast: bool,
    unknowns: Ambient,
    slots: Vec<Slot>,
    constraints: Ambient,
    // (edge, endpoint, column, row) -> constraint component
    cindex: HashMap<(usize, usize, usize, usize), usize>,
}

impl<'a> HomSystem<'a> {
    pub fn new(src: &'a Sheaf, tgt: &'a Sheaf, region: Option<&[bool]>) -> HomSystem<'a> {
        Self::build(src, tgt, region, src.is_standard() && tgt.is_standard())
    }

    /// Always solves for edge components too.
    pub fn general(src: &'a Sheaf, tgt: &'a Sheaf, region: Option<&[bool]>) -> HomSystem<'a> {
        Self::build(src, tgt, region, false)
    }

    fn build(src: &'a Sheaf, tgt: &'a Sheaf, region: Option<&[bool]>, fast: bool) -> HomSystem<'a> {
        let g = &src.graph;
        let n = src.nvars();
        let region: Vec<bool> = region
            .map(|r| r.to_vec())
            .unwrap_or_else(|| vec![true; g.len()]);
        let mut unknowns = Ambient::new(n);
        let mut slots = Vec::new();
        for x in 0..g.len() {
            if !region[x] {
                continue;
            }
            for i in 0..tgt.rank(x) {
                for j in 0..src.rank(x) {
                    unknowns.comps.push(Comp {
                        shift: tgt.stalks[x][i] - src.stalks[x][j],
                        ann: None,
                    });
                    slots.push(Slot::Vertex(x, i, j));
                }
            }
        }
        let internal: Vec<usize> = (0..g.edges.len())
            .filter(|&k| region[g.edges[k].lower] && region[g.edges[k].upper])
            .collect();
        if !fast {
            for &k in &internal {
                let (fs, gs) = (&src.edges[k].shifts, &tgt.edges[k].shifts);
                for i in 0..gs.len() {
                    for j in 0..fs.len() {
                        unknowns.comps.push(Comp {
                            shift: gs[i] - fs[j],
                            ann: Some(g.annihilator(k).clone()),
                        });
                        slots.push(Slot::Edge(k, i, j));
                    }
                }
            }
        }
        let mut constraints = Ambient::new(n);
        let mut cindex = HashMap::new();
        for &k in &internal {
            let ed = &g.edges[k];
            let gs = &tgt.edges[k].shifts;
            let ends: &[usize] = if fast {
                &[ed.lower][..]
            } else {
                &[ed.lower, ed.upper][..]
            };
            for &x in ends {
                for j in 0..src.rank(x) {
                    for (i, gsi) in gs.iter().enumerate() {
                        cindex.insert((k, x, j, i), constraints.comps.len());
                        constraints.comps.push(Comp {
                            shift: gsi - src.stalks[x][j],
                            ann: Some(g.annihilator(k).clone()),
                        });
                    }
                }
            }
        }
        HomSystem {
            src,
            tgt,
            region,
            fast,
            unknowns,
            slots,
            constraints,
            cindex,
        }
    }

    fn image(&self, c: usize, mono: &Poly) -> Vec<Poly> {
        let g = &self.src.graph;
        let mut out = self.constraints.zero_elem();
        let mut add = |key: (usize, usize, usize, usize), p: Poly| {
            if let Some(&ix) = self.cindex.get(&key) {
                out[ix] = out[ix].add(&p);
            }
        };
        match self.slots[c] {
            Slot::Vertex(x, a, j) => {
                for &k in g.up_edges(x).iter().chain(g.down_edges(x)) {
                    let ed = &g.edges[k];
                    if !(self.region[ed.lower] && self.region[ed.upper]) {
                        continue;
                    }
                    let rho_g = self.tgt.rho(x, k);
                    if ed.lower == x || !self.fast {
                        for i in 0..rho_g.rows {
                            add((k, x, j, i), rho_g.get(i, a).mul(mono));
                        }
                    }
                    if self.fast && ed.upper == x {
                        // φ^E = φ^upper: contributes −φ^y ρ^F_{lower}
                        let lower = ed.lower;
                        let rho_f = self.src.rho(lower, k);
                        for jj in 0..self.src.rank(lower) {
                            let p = rho_f.get(j, jj);
                            if !p.is_zero() {
                                add((k, lower, jj, a), p.mul(mono).neg());
                            }
                        }
                    }
                }
            }
            Slot::Edge(k, i, b) => {
                let ed = &g.edges[k];
                for x in [ed.lower, ed.upper] {
                    let rho_f = self.src.rho(x, k);
                    for j in 0..self.src.rank(x) {
                        let p = rho_f.get(b, j);
                        if !p.is_zero() {
                            add((k, x, j, i), p.mul(mono).neg());
                        }
                    }
                }
            }
        }
        out
    }

    /// Raw solutions in degree δ, as elements of the unknown ambient.
    pub fn basis_raw(&self, delta: i32) -> Vec<Vec<Poly>> {
        kernel_in_degree_fn(
            &self.unknowns,
            &self.constraints,
            delta,
            delta,
            |c, mono| self.image(c, mono),
        )
    }

    pub fn to_morphism(&self, e: &[Poly], delta: i32) -> SheafMorphism {
        let g = &self.src.graph;
        let n = self.src.nvars();
        let mut vertex: Vec<PolyMatrix> = (0..g.len())
            .map(|x| PolyMatrix::zero(self.tgt.rank(x), self.src.rank(x), n))
            .collect();
        let mut edge: Vec<PolyMatrix> = (0..g.edges.len())
            .map(|k| {
                PolyMatrix::zero(
                    self.tgt.edges[k].shifts.len(),
                    self.src.edges[k].shifts.len(),
                    n,
                )
            })
            .collect();
        for (c, p) in e.iter().enumerate() {
            match self.slots[c] {
                Slot::Vertex(x, i, j) => vertex[x].set(i, j, p.clone()),
                Slot::Edge(k, i, j) => edge[k].set(i, j, p.clone()),
            }
        }
        if self.fast {
            for (k, ed) in g.edges.iter().enumerate() {
                if self.region[ed.lower] && self.region[ed.upper] {
                    let ann = g.annihilator(k);
                    edge[k] = vertex[ed.upper].map(|p| ann.reduce(p));
                }
            }
        }
        SheafMorphism {
            degree: delta,
            vertex,
            edge,
        }
    }

    pub fn basis(&self, delta: i32) -> Vec<SheafMorphism> {
        self.basis_raw(delta)
            .iter()
            .map(|e| self.to_morphism(e, delta))
            .collect()
    }

    pub fn dim(&self, delta: i32) -> usize {
        self.basis_raw(delta).len()
    }

    /// Minimal R-module generators of Hom^• in [lo, hi] and whether they span freely.
    pub fn generators(&self, lo: i32, hi: i32) -> Result<(Vec<(i32, SheafMorphism)>, bool)> {
        let gens = minimal_generators(&self.unknowns, lo, hi, |d| Ok(self.basis_raw(d)))?;
        let free = spans_freely(&self.unknowns, &gens, lo, hi);
        Ok((
            gens.iter()
                .map(|(d, e)| (*d, self.to_morphism(e, *d)))
                .collect(),
            free,
        ))
    }
}

/// Basis of Hom^δ(F, G), optionally over a region (full subgraph).
pub fn hom_space(
    src: &Sheaf,
    tgt: &Sheaf,
    delta: i32,
    region: Option<&[bool]>,
) -> Vec<SheafMorphism> {
    HomSystem::new(src, tgt, region).basis(delta)
}

pub fn hom_dim(src: &Sheaf, tgt: &Sheaf, delta: i32, region: Option<&[bool]>) -> usize {
    HomSystem::new(src, tgt, region).dim(delta)
}
