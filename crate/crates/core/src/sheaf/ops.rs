//! Sections and the naive functors i_*, j^*, i^[*], i^[!], f^*.

use super::graph::{GraphMorphism, MomentGraph, VertexSet};
use super::sheaf::{EdgeModule, Sheaf, SheafMorphism};
use crate::error::{Error, Result};
use crate::polyalg::graded::{kernel_in_degree_fn, minimal_generators, spans_freely};
use crate::polyalg::{Ambient, Poly, PolyMatrix};
use std::sync::Arc;

/// An element of ⊕_x F^x, one polynomial vector per vertex.
pub type Section = Vec<Vec<Poly>>;

/// Concatenation of several ambients with a component → (block, local) map.
pub(crate) struct Stack {
    pub amb: Ambient,
    pub starts: Vec<usize>,
    pub owner: Vec<(usize, usize)>,
}

impl Stack {
    pub fn new(nvars: usize, blocks: &[Ambient]) -> Stack {
        let mut amb = Ambient::new(nvars);
        let mut starts = Vec::new();
        let mut owner = Vec::new();
        for (b, a) in blocks.iter().enumerate() {
            starts.push(amb.comps.len());
            for (j, c) in a.comps.iter().enumerate() {
                amb.comps.push(c.clone());
                owner.push((b, j));
            }
        }
        starts.push(amb.comps.len());
        Stack { amb, starts, owner }
    }

    pub fn split(&self, e: &[Poly]) -> Vec<Vec<Poly>> {
        (0..self.starts.len() - 1)
            .map(|b| e[self.starts[b]..self.starts[b + 1]].to_vec())
            .collect()
    }
}

fn section_stack(f: &Sheaf, set: &[bool]) -> (Stack, Vec<usize>) {
    let verts: Vec<usize> = (0..f.graph.len())
        .filter(|&x| set[x] && f.rank(x) > 0)
        .collect();
    let blocks: Vec<Ambient> = verts.iter().map(|&x| f.stalk_ambient(x)).collect();
    (Stack::new(f.nvars(), &blocks), verts)
}

fn internal_edges(g: &MomentGraph, set: &[bool]) -> Vec<usize> {
    (0..g.edges.len())
        .filter(|&k| set[g.edges[k].lower] && set[g.edges[k].upper])
        .collect()
}

/// Basis of Γ(I, F) in degree d.
pub fn sections_in_degree(f: &Sheaf, set: &[bool], d: i32) -> Vec<Section> {
    let g = &f.graph;
    let (src, verts) = section_stack(f, set);
    let edges: Vec<usize> = internal_edges(g, set)
        .into_iter()
        .filter(|&k| !f.edges[k].shifts.is_empty())
        .collect();
    let tgt = Stack::new(
        f.nvars(),
        &edges.iter().map(|&k| f.edge_ambient(k)).collect::<Vec<_>>(),
    );
    let kernel = kernel_in_degree_fn(&src.amb, &tgt.amb, d, d, |c, mono| {
        let (b, j) = src.owner[c];
        let x = verts[b];
        let mut out = tgt.amb.zero_elem();
        for (eb, &k) in edges.iter().enumerate() {
            let ed = &g.edges[k];
            let sign = if ed.lower == x {
                1
            } else if ed.upper == x {
                -1
            } else {
                continue;
            };
            let rho = f.rho(x, k);
            for i in 0..rho.rows {
                let p = rho.get(i, j).mul(mono);
                let slot = &mut out[tgt.starts[eb] + i];
                *slot = if sign > 0 { slot.add(&p) } else { slot.sub(&p) };
            }
        }
        out
    });
    kernel
        .into_iter()
        .map(|e| expand_section(f, &verts, &src.split(&e)))
        .collect()
}

fn expand_section(f: &Sheaf, verts: &[usize], parts: &[Vec<Poly>]) -> Section {
    let mut s: Section = f
        .stalks
        .iter()
        .map(|st| vec![Poly::zero(f.nvars()); st.len()])
        .collect();
    for (b, &x) in verts.iter().enumerate() {
        s[x] = parts[b].clone();
    }
    s
}

/// Ambient ⊕_{x ∈ I} F^x with sections flattened in vertex order.
pub fn section_ambient(f: &Sheaf, set: &[bool]) -> Ambient {
    section_stack(f, set).0.amb
}

pub fn flatten_section(f: &Sheaf, set: &[bool], s: &Section) -> Vec<Poly> {
    (0..f.graph.len())
        .filter(|&x| set[x] && f.rank(x) > 0)
        .flat_map(|x| s[x].iter().cloned())
        .collect()
}

pub fn unflatten_section(f: &Sheaf, set: &[bool], e: &[Poly]) -> Section {
    let (st, verts) = section_stack(f, set);
    expand_section(f, &verts, &st.split(e))
}

/// Minimal R-module generators of Γ(I, F) found in the window [lo, hi].
pub fn section_generators(
    f: &Sheaf,
    set: &[bool],
    lo: i32,
    hi: i32,
) -> Result<Vec<(i32, Section)>> {
    let amb = section_ambient(f, set);
    let gens = minimal_generators(&amb, lo, hi, |d| {
        Ok(sections_in_degree(f, set, d)
            .iter()
            .map(|s| flatten_section(f, set, s))
            .collect())
    })?;
    Ok(gens
        .into_iter()
        .map(|(d, e)| (d, unflatten_section(f, set, &e)))
        .collect())
}

/// Default generator window for Γ: from the lowest stalk generator up past the longest label product at a vertex.
pub fn default_window(f: &Sheaf) -> (i32, i32) {
    let degs: Vec<i32> = f.stalks.iter().flatten().map(|s| -s).collect();
    let lo = degs.iter().copied().min().unwrap_or(0);
    let hi = degs.iter().copied().max().unwrap_or(0);
    let ups = (0..f.graph.len())
        .map(|x| f.graph.up_edges(x).len())
        .max()
        .unwrap_or(0) as i32;
    (lo, hi + 2 * ups + 4)
}

/// j^* / i^[*]: the restriction to a full subgraph, with the vertex map new → old.
pub fn restrict(f: &Sheaf, set: &[bool]) -> (Sheaf, Vec<usize>) {
    let (sub, old) = f.graph.subgraph(set);
    let sub = Arc::new(sub);
    let stalks = old.iter().map(|&x| f.stalks[x].clone()).collect();
    let edges = sub
        .edges
        .iter()
        .map(|e| {
            let k = f
                .graph
                .edge_between(old[e.lower], old[e.upper])
                .expect("edge of subgraph");
            f.edges[k].clone()
        })
        .collect();
    (
        Sheaf {
            graph: sub,
            stalks,
            edges,
        },
        old,
    )
}

/// Restriction of a morphism to a full subgraph.
pub fn restrict_morphism(phi: &SheafMorphism, g: &MomentGraph, set: &[bool]) -> SheafMorphism {
    let (sub, old) = g.subgraph(set);
    SheafMorphism {
        degree: phi.degree,
        vertex: old.iter().map(|&x| phi.vertex[x].clone()).collect(),
        edge: sub
            .edges
            .iter()
            .map(|e| phi.edge[g.edge_between(old[e.lower], old[e.upper]).unwrap()].clone())
            .collect(),
    }
}

/// i_* = i_!: extension by zero from a closed subgraph given by `old` (sub vertex → X vertex).
pub fn extend_by_zero(fz: &Sheaf, x: &Arc<MomentGraph>, old: &[usize]) -> Result<Sheaf> {
    let mut set = vec![false; x.len()];
    for &v in old {
        set[v] = true;
    }
    if !x.is_closed(&set) {
        return Err(Error::NotClosed(
            "extension by zero needs a downward closed set".into(),
        ));
    }
    let n = x.nvars();
    let mut stalks = vec![Vec::new(); x.len()];
    for (i, &v) in old.iter().enumerate() {
        stalks[v] = fz.stalks[i].clone();
    }
    let edges = x
        .edges
        .iter()
        .map(|e| {
            if set[e.lower] && set[e.upper] {
                let i = old.iter().position(|&v| v == e.lower).unwrap();
                let j = old.iter().position(|&v| v == e.upper).unwrap();
                fz.edges[fz.graph.edge_between(i, j).expect("full subgraph")].clone()
            } else {
                EdgeModule {
                    shifts: vec![],
                    rho_lower: PolyMatrix::zero(0, stalks[e.lower].len(), n),
                    rho_upper: PolyMatrix::zero(0, stalks[e.upper].len(), n),
                }
            }
        })
        .collect();
    Ok(Sheaf {
        graph: x.clone(),
        stalks,
        edges,
    })
}

/// i_* i^[*] F together with the unit F → i_* i^[*] F.
pub fn closed_part(f: &Sheaf, z: &[bool]) -> Result<(Sheaf, SheafMorphism)> {
    let (fz, old) = restrict(f, z);
    let e = extend_by_zero(&fz, &f.graph, &old)?;
    let n = f.nvars();
    let unit = SheafMorphism {
        degree: 0,
        vertex: (0..f.graph.len())
            .map(|x| {
                if z[x] {
                    PolyMatrix::identity(f.rank(x), n)
                } else {
                    PolyMatrix::zero(0, f.rank(x), n)
                }
            })
            .collect(),
        edge: (0..f.edges.len())
            .map(|k| {
                let ed = &f.graph.edges[k];
                let r = f.edges[k].shifts.len();
                if z[ed.lower] && z[ed.upper] {
                    PolyMatrix::identity(r, n)
                } else {
                    PolyMatrix::zero(0, r, n)
                }
            })
            .collect(),
    };
    Ok((e, unit))
}

/// Generators of the partial costalk at s: the submodule killed by ρ_{s,E} for the given edges.
pub fn kernel_generators(
    f: &Sheaf,
    s: usize,
    edges: &[usize],
) -> Result<(Vec<(i32, Vec<Poly>)>, bool)> {
    let amb = f.stalk_ambient(s);
    if f.rank(s) == 0 {
        return Ok((vec![], true));
    }
    let edges: Vec<usize> = edges
        .iter()
        .copied()
        .filter(|&k| !f.edges[k].shifts.is_empty())
        .collect();
    let tgt = Stack::new(
        f.nvars(),
        &edges.iter().map(|&k| f.edge_ambient(k)).collect::<Vec<_>>(),
    );
    let degs: Vec<i32> = f.stalks[s].iter().map(|x| -x).collect();
    let lo = *degs.iter().min().unwrap();
    let hi = *degs.iter().max().unwrap() + 2 * edges.len() as i32 + 4;
    let gens = minimal_generators(&amb, lo, hi, |d| {
        Ok(kernel_in_degree_fn(&amb, &tgt.amb, d, d, |j, mono| {
            let mut out = tgt.amb.zero_elem();
            for (b, &k) in edges.iter().enumerate() {
                let rho = f.rho(s, k);
                for i in 0..rho.rows {
                    out[tgt.starts[b] + i] = rho.get(i, j).mul(mono);
                }
            }
            out
        }))
    })?;
    let free = spans_freely(&amb, &gens, lo, hi);
    Ok((gens, free))
}

/// Costalk at s relative to all upward edges; errors unless it is free.
pub fn costalk(f: &Sheaf, s: usize) -> Result<Vec<(i32, Vec<Poly>)>> {
    let (gens, free) = kernel_generators(f, s, f.graph.up_edges(s))?;
    if !free {
        return Err(Error::NotFreeInWindow(format!(
            "costalk at {}",
            f.graph.vertices[s].id
        )));
    }
    Ok(gens)
}

/// i^[!] for closed Z: the corestricted sheaf on X (zero off Z) and the counit into F.
pub fn corestrict(f: &Sheaf, z: &[bool]) -> Result<(Sheaf, SheafMorphism)> {
    let g = &f.graph;
    if !g.is_closed(z) {
        return Err(Error::NotClosed(
            "corestriction needs a downward closed set".into(),
        ));
    }
    let n = f.nvars();
    let mut stalks = vec![Vec::new(); g.len()];
    let mut incl = vec![PolyMatrix::zero(0, 0, n); g.len()];
    for s in 0..g.len() {
        if !z[s] {
            incl[s] = PolyMatrix::zero(f.rank(s), 0, n);
            continue;
        }
        let off: Vec<usize> = g
            .up_edges(s)
            .iter()
            .copied()
            .filter(|&k| !z[g.edges[k].upper])
            .collect();
        let (gens, free) = kernel_generators(f, s, &off)?;
        if !free {
            return Err(Error::NotFreeInWindow(format!(
                "partial costalk at {}",
                g.vertices[s].id
            )));
        }
        stalks[s] = gens.iter().map(|(d, _)| -d).collect();
        incl[s] = PolyMatrix::from_columns(
            f.rank(s),
            n,
            &gens.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(),
        );
    }
    let mut edges = Vec::new();
    let mut edge_maps = Vec::new();
    for (k, ed) in g.edges.iter().enumerate() {
        let r = f.edges[k].shifts.len();
        if z[ed.lower] && z[ed.upper] {
            let ann = g.annihilator(k);
            let red = |m: PolyMatrix| m.map(|p| ann.reduce(p));
            edges.push(EdgeModule {
                shifts: f.edges[k].shifts.clone(),
                rho_lower: red(f.edges[k].rho_lower.mul(&incl[ed.lower])),
                rho_upper: red(f.edges[k].rho_upper.mul(&incl[ed.upper])),
            });
            edge_maps.push(PolyMatrix::identity(r, n));
        } else {
            edges.push(EdgeModule {
                shifts: vec![],
                rho_lower: PolyMatrix::zero(0, stalks[ed.lower].len(), n),
                rho_upper: PolyMatrix::zero(0, stalks[ed.upper].len(), n),
            });
            edge_maps.push(PolyMatrix::zero(r, 0, n));
        }
    }
    let c = Sheaf {
        graph: g.clone(),
        stalks,
        edges,
    };
    Ok((
        c,
        SheafMorphism {
            degree: 0,
            vertex: incl,
            edge: edge_maps,
        },
    ))
}

/// f^*: pullback along a morphism of moment graphs.
pub fn pullback(x: &Arc<MomentGraph>, f: &GraphMorphism, gsh: &Sheaf) -> Result<Sheaf> {
    f.validate(x, &gsh.graph)?;
    let n = x.nvars();
    let stalks: Vec<Vec<i32>> = (0..x.len()).map(|v| gsh.stalks[f.map[v]].clone()).collect();
    let edges = x
        .edges
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let (a, b) = (f.map[e.lower], f.map[e.upper]);
            if a == b {
                let ann = x.annihilator(k);
                let shifts = stalks[e.upper].clone();
                let id = PolyMatrix::identity(shifts.len(), n).map(|p| ann.reduce(p));
                EdgeModule {
                    shifts,
                    rho_lower: id.clone(),
                    rho_upper: id,
                }
            } else {
                let kk = gsh.graph.edge_between(a, b).unwrap();
                EdgeModule {
                    shifts: gsh.edges[kk].shifts.clone(),
                    rho_lower: gsh.rho(a, kk).clone(),
                    rho_upper: gsh.rho(b, kk).clone(),
                }
            }
        })
        .collect();
    Ok(Sheaf {
        graph: x.clone(),
        stalks,
        edges,
    })
}

pub fn pullback_morphism(
    x: &MomentGraph,
    f: &GraphMorphism,
    ytgt: &MomentGraph,
    phi: &SheafMorphism,
) -> SheafMorphism {
    SheafMorphism {
        degree: phi.degree,
        vertex: (0..x.len()).map(|v| phi.vertex[f.map[v]].clone()).collect(),
        edge: x
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let (a, b) = (f.map[e.lower], f.map[e.upper]);
                if a == b {
                    let ann = x.annihilator(k);
                    phi.vertex[a].map(|p| ann.reduce(p))
                } else {
                    phi.edge[ytgt.edge_between(a, b).unwrap()].clone()
                }
            })
            .collect(),
    }
}

/// Sets of vertices as boolean masks.
pub fn mask(n: usize, members: &[usize]) -> VertexSet {
    let mut v = vec![false; n];
    for &m in members {
        v[m] = true;
    }
    v
}
