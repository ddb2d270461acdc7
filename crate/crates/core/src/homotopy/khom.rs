//! Morphisms in the homotopy category: graded Hom dimensions, their constructible
//! counterparts, and witnessed homotopy equivalences.

use super::complex::{Additive, Block, ChainMap, Ops};
use super::ctx::{BmpComplex, BmpCtx};
use crate::error::{Error, Result};
use crate::polyalg::linalg::{dense_rank, kernel, rank};
use crate::polyalg::poly::count_monomials;
use crate::polyalg::{Monomial, Poly, Scalar, SparseVec};
use crate::sheaf::SheafMorphism;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};

/// An element of the Hom complex: blocks keyed by (source degree, target index, source index).
pub type Elem = BTreeMap<(i32, usize, usize), SheafMorphism>;

type Key = (i32, usize, usize, usize, usize, usize, Monomial);

/// Coordinates on vertex components; edge components are determined by them.
#[derive(Default)]
pub struct Coords(HashMap<Key, usize>);

impl Coords {
    pub fn encode(&mut self, f: &Elem) -> SparseVec {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (&(i, q, p), m) in f {
            for (v, mat) in m.vertex.iter().enumerate() {
                for r in 0..mat.rows {
                    for c in 0..mat.cols {
                        for (mono, coef) in mat.get(r, c).terms() {
                            let n = self.0.len();
                            let k = *self.0.entry((i, q, p, v, r, c, mono.clone())).or_insert(n);
                            *out.entry(k).or_insert_with(Scalar::zero) += coef;
                        }
                    }
                }
            }
        }
        SparseVec::from_map(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}

/// Hom^•(C, D) as a complex of graded vector spaces: K^j = ⊕_i Hom(C^i, D^{i+j}).
pub struct HomComplex<'a, 'b> {
    pub ctx: &'a BmpCtx<'b>,
    pub c: &'a BmpComplex,
    pub d: &'a BmpComplex,
}

impl HomComplex<'_, '_> {
    /// Basis of K^j in internal degree δ, one block per element.
    pub fn basis(&self, j: i32, delta: i32) -> Result<Vec<Elem>> {
        let mut out = Vec::new();
        for i in self.c.lo..=self.c.hi() {
            for (p, &(x, a)) in self.c.term(i).iter().enumerate() {
                for (q, &(y, b)) in self.d.term(i + j).iter().enumerate() {
                    for m in self.ctx.cat.hom_basis(x, y, delta + b - a)?.iter() {
                        let m = self.ctx.mask(m.clone());
                        if !m.is_zero() {
                            out.push([((i, q, p), m)].into_iter().collect());
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// ∂f = d_D f − (−1)^j f d_C.
    pub fn differential(&self, f: &Elem, j: i32) -> Elem {
        let ctx = self.ctx;
        let sign = if j % 2 == 0 {
            Scalar::from_i64(-1)
        } else {
            Scalar::one()
        };
        let mut out: Elem = BTreeMap::new();
        let mut push = |k: (i32, usize, usize), m: SheafMorphism| {
            if m.is_zero() {
                return;
            }
            match out.remove(&k) {
                Some(cur) => {
                    let s = cur.add(&m);
                    if !s.is_zero() {
                        out.insert(k, s);
                    }
                }
                None => {
                    out.insert(k, m);
                }
            }
        };
        for (&(i, q, p), phi) in f {
            let dd = self.d.diff(i + j);
            for qq in 0..dd.rows {
                if let Some(a) = dd.get(qq, q) {
                    push((i, qq, p), ctx.compose(a, phi));
                }
            }
            let dc = self.c.diff(i - 1);
            for pp in 0..dc.cols {
                if let Some(a) = dc.get(p, pp) {
                    push((i - 1, q, pp), ctx.compose(phi, a).scale(&sign));
                }
            }
        }
        out
    }

    fn images(&self, basis: &[Elem], j: i32, coords: &mut Coords) -> Vec<SparseVec> {
        basis
            .iter()
            .map(|f| coords.encode(&self.differential(f, j)))
            .collect()
    }

    /// dim H^j of Hom^•(C, D) in internal degree δ, i.e. dim Hom_{K^b}(C, D[j]) in degree δ.
    pub fn dim(&self, j: i32, delta: i32) -> Result<usize> {
        let b = self.basis(j, delta)?;
        let bp = self.basis(j - 1, delta)?;
        let r = rank(&self.images(&b, j, &mut Coords::default()));
        let rp = rank(&self.images(&bp, j - 1, &mut Coords::default()));
        Ok(b.len() - r - rp)
    }

    /// Cycles in K^j, degree δ.
    pub fn cycles(&self, j: i32, delta: i32) -> Result<Vec<Elem>> {
        let b = self.basis(j, delta)?;
        let ims = self.images(&b, j, &mut Coords::default());
        Ok(kernel(&ims).iter().map(|v| combine(&b, v)).collect())
    }
}

/// Σ v_k · basis_k.
pub fn combine(basis: &[Elem], v: &SparseVec) -> Elem {
    let mut out: Elem = BTreeMap::new();
    for (k, c) in &v.0 {
        for (key, m) in &basis[*k] {
            let t = m.scale(c);
            let s = match out.remove(key) {
                Some(cur) => cur.add(&t),
                None => t,
            };
            if !s.is_zero() {
                out.insert(*key, s);
            }
        }
    }
    out
}

fn times(f: &Elem, p: &Poly) -> Elem {
    f.iter()
        .map(|(k, m)| {
            let mut m = m.clone();
            m.degree += 2;
            for v in m.vertex.iter_mut() {
                *v = v.scale_poly(p);
            }
            for e in m.edge.iter_mut() {
                *e = e.scale_poly(p);
            }
            (*k, m)
        })
        .filter(|(_, m)| !m.is_zero())
        .collect()
}

/// dim Hom_{K^b}(C, D[j]) in internal degree δ.
pub fn khom(ctx: &BmpCtx, c: &BmpComplex, d: &BmpComplex, j: i32, delta: i32) -> Result<usize> {
    HomComplex { ctx, c, d }.dim(j, delta)
}

/// Graded dimensions of Hom(C, D[j]) across a window of internal degrees.
pub fn khom_series(
    ctx: &BmpCtx,
    c: &BmpComplex,
    d: &BmpComplex,
    j: i32,
    lo: i32,
    hi: i32,
) -> Result<Vec<(i32, usize)>> {
    let h = HomComplex { ctx, c, d };
    (lo..=hi)
        .map(|delta| Ok((delta, h.dim(j, delta)?)))
        .collect()
}

/// Minimal R-generators of Hom^•(C, D[j]) found in [lo, hi].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgetHom {
    /// (internal degree, number of generators)
    pub generators: Vec<(i32, usize)>,
    /// Whether the graded dimensions in the window are those of the free module on the generators.
    pub free: bool,
}

impl ForgetHom {
    /// Total dimension of 𝕜 ⊗_R Hom.
    pub fn total(&self) -> usize {
        self.generators.iter().map(|g| g.1).sum()
    }
}

/// 𝕜 ⊗_R Hom^•(C, D[j]), computed from the R-module generators of the graded Hom.
pub fn forget_hom(
    ctx: &BmpCtx,
    c: &BmpComplex,
    d: &BmpComplex,
    j: i32,
    lo: i32,
    hi: i32,
) -> Result<ForgetHom> {
    let h = HomComplex { ctx, c, d };
    let n = ctx.cat.graph().nvars();
    let vars: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    let mut cycles: BTreeMap<i32, Vec<Elem>> = BTreeMap::new();
    let mut gens = Vec::new();
    let mut dims = Vec::new();
    for delta in (lo - 2)..=hi {
        let mut coords = Coords::default();
        let z = h.cycles(j, delta)?;
        let bp = h.basis(j - 1, delta)?;
        let mut span: Vec<SparseVec> = bp
            .iter()
            .map(|f| coords.encode(&h.differential(f, j - 1)))
            .collect();
        let boundaries = rank(&span);
        for f in cycles.get(&(delta - 2)).into_iter().flatten() {
            for v in &vars {
                span.push(coords.encode(&times(f, v)));
            }
        }
        let g = z.len() - rank(&span);
        if delta >= lo {
            dims.push((delta, z.len() - boundaries));
            if g > 0 {
                gens.push((delta, g));
            }
        }
        cycles.insert(delta, z);
    }
    let free = dims.iter().all(|&(delta, dim)| {
        let expect: usize = gens
            .iter()
            .filter(|g| g.0 <= delta)
            .map(|&(e, k)| k * r_dim(n, delta - e))
            .sum();
        expect == dim
    });
    Ok(ForgetHom {
        generators: gens,
        free,
    })
}

/// dim R_δ.
pub fn r_dim(nvars: usize, delta: i32) -> usize {
    if delta < 0 || delta % 2 != 0 {
        0
    } else {
        count_monomials(nvars, (delta / 2) as i64)
    }
}

/// An explicit chain isomorphism between minimal models.
#[derive(Clone, Debug)]
pub struct Witness {
    pub source: BmpComplex,
    pub target: BmpComplex,
    pub map: ChainMap<SheafMorphism>,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Equivalent(Box<Witness>),
    Refuted(String),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }
}

const TRIES: usize = 8;

/// Decides C ≃ D by minimizing and searching for a chain map that is invertible on the
/// scalar parts between equal labels; refutes on differing minimal terms or an empty Hom⁰.
pub fn is_homotopy_equiv(
    ctx: &BmpCtx,
    c: &BmpComplex,
    d: &BmpComplex,
    seed: u64,
) -> Result<Verdict> {
    let ops = Ops(ctx);
    let (mc, md) = (ops.minimize(c), ops.minimize(d));
    if mc.label_multiset() != md.label_multiset() {
        return Ok(Verdict::Refuted(
            "minimal complexes have different terms".into(),
        ));
    }
    if mc.is_empty() {
        return Ok(Verdict::Equivalent(Box::new(Witness {
            map: ChainMap {
                degree: 0,
                blocks: BTreeMap::new(),
            },
            source: mc,
            target: md,
        })));
    }
    let h = HomComplex {
        ctx,
        c: &mc,
        d: &md,
    };
    let z = h.cycles(0, 0)?;
    if z.is_empty() {
        return Ok(Verdict::Refuted("no degree-zero chain maps".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..TRIES {
        let v = SparseVec::from_dense(
            &(0..z.len())
                .map(|_| Scalar::from_i64(rng.gen_range(-7..=7)))
                .collect::<Vec<_>>(),
        );
        let f = combine(&z, &v);
        let map = to_chain_map(&f, &mc, &md);
        if invertible_on_scalars(ctx, &map, &mc, &md) && ops.is_chain_map(&mc, &md, &map) {
            return Ok(Verdict::Equivalent(Box::new(Witness {
                source: mc,
                target: md,
                map,
            })));
        }
    }
    Err(Error::Inconclusive(format!(
        "no invertible chain map among {TRIES} random cycles"
    )))
}

pub fn to_chain_map(f: &Elem, c: &BmpComplex, d: &BmpComplex) -> ChainMap<SheafMorphism> {
    let mut blocks: BTreeMap<i32, Block<SheafMorphism>> = BTreeMap::new();
    for (&(i, q, p), m) in f {
        blocks
            .entry(i)
            .or_insert_with(|| Block::zero(d.term(i).len(), c.term(i).len()))
            .set(q, p, Some(m.clone()));
    }
    ChainMap { degree: 0, blocks }
}

/// Whether, in every degree and for every label, the scalar block between equal labels is invertible.
pub fn invertible_on_scalars(
    ctx: &BmpCtx,
    f: &ChainMap<SheafMorphism>,
    c: &BmpComplex,
    d: &BmpComplex,
) -> bool {
    (c.lo..=c.hi()).all(|i| {
        let b = f.block(i, c, d);
        let mut labels = c.term(i).to_vec();
        labels.sort();
        labels.dedup();
        labels.iter().all(|l| {
            let ps: Vec<usize> = (0..c.term(i).len())
                .filter(|&p| &c.term(i)[p] == l)
                .collect();
            let qs: Vec<usize> = (0..d.term(i).len())
                .filter(|&q| &d.term(i)[q] == l)
                .collect();
            if ps.len() != qs.len() {
                return false;
            }
            let m: Vec<Vec<Scalar>> = qs
                .iter()
                .map(|&q| {
                    ps.iter()
                        .map(|&p| {
                            b.get(q, p)
                                .map(|a| ctx.iso_scalar(l, a))
                                .unwrap_or_else(Scalar::zero)
                        })
                        .collect()
                })
                .collect();
            dense_rank(&m) == ps.len()
        })
    })
}

/// Whether a morphism E_x → E_y of positive degree lies in R_+ · Hom(E_x, E_y).
pub fn in_positive_part(ctx: &BmpCtx, x: usize, y: usize, m: &SheafMorphism) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    let n = ctx.cat.graph().nvars();
    let mut coords = Coords::default();
    let key =
        |m: &SheafMorphism| -> Elem { [((0, 0, 0), ctx.mask(m.clone()))].into_iter().collect() };
    let mut span = Vec::new();
    for b in ctx.cat.hom_basis(x, y, m.degree - 2)?.iter() {
        for i in 0..n {
            span.push(coords.encode(&times(&key(b), &Poly::var(n, i))));
        }
    }
    let r = rank(&span);
    span.push(coords.encode(&key(m)));
    Ok(rank(&span) == r)
}
