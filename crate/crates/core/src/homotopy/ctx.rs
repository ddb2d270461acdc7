//! The two additive categories complexes live in: BMP sheaves over an open region, and
//! graded free modules over R.

use super::complex::{Additive, Complex};
use crate::bmp::BmpCategory;
use crate::error::Result;
use crate::polyalg::{Poly, PolyMatrix, Scalar};
use crate::sheaf::{Sheaf, SheafMorphism};
use std::sync::Arc;

/// A label (x, a) stands for E_x{a}.
pub type Label = (usize, i32);
pub type BmpComplex = Complex<Label, SheafMorphism>;
pub type FreeComplex = Complex<i32, Poly>;

/// BMP sheaves restricted to an open region; arrows vanish off the region.
pub struct BmpCtx<'a> {
    pub cat: &'a BmpCategory,
    pub region: Vec<bool>,
    objects: Vec<Arc<Sheaf>>,
}

impl<'a> BmpCtx<'a> {
    pub fn new(cat: &'a BmpCategory) -> Result<BmpCtx<'a>> {
        Self::on(cat, vec![true; cat.len()])
    }

    pub fn on(cat: &'a BmpCategory, region: Vec<bool>) -> Result<BmpCtx<'a>> {
        let objects = (0..cat.len())
            .map(|x| cat.object(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(BmpCtx {
            cat,
            region,
            objects,
        })
    }

    pub fn with_region(&self, region: Vec<bool>) -> BmpCtx<'a> {
        BmpCtx {
            cat: self.cat,
            region,
            objects: self.objects.clone(),
        }
    }

    pub fn object(&self, x: usize) -> &Arc<Sheaf> {
        &self.objects[x]
    }

    /// Zeroes every component off the region and recomputes edge components.
    pub fn mask(&self, mut m: SheafMorphism) -> SheafMorphism {
        let g = self.cat.graph();
        for (x, v) in m.vertex.iter_mut().enumerate() {
            if !self.region[x] {
                *v = PolyMatrix::zero(v.rows, v.cols, v.nvars);
            }
        }
        for (k, e) in g.edges.iter().enumerate() {
            let cur = &m.edge[k];
            m.edge[k] = if self.region[e.lower] && self.region[e.upper] {
                let ann = g.annihilator(k);
                m.vertex[e.upper].map(|p| ann.reduce(p))
            } else {
                PolyMatrix::zero(cur.rows, cur.cols, cur.nvars)
            };
        }
        m
    }

    /// The morphism E_x → E_y of the given degree with prescribed vertex components.
    pub fn arrow(
        &self,
        x: usize,
        y: usize,
        degree: i32,
        comps: &[(usize, PolyMatrix)],
    ) -> SheafMorphism {
        let mut m = SheafMorphism::zero(&self.objects[x], &self.objects[y], degree);
        for (v, c) in comps {
            m.vertex[*v] = c.clone();
        }
        self.mask(m)
    }
}

impl Additive for BmpCtx<'_> {
    type Label = Label;
    type Arrow = SheafMorphism;

    fn compose(&self, g: &SheafMorphism, f: &SheafMorphism) -> SheafMorphism {
        g.compose_in(f, self.cat.graph())
    }

    fn add(&self, a: &SheafMorphism, b: &SheafMorphism) -> SheafMorphism {
        a.add(b)
    }

    fn scale(&self, a: &SheafMorphism, c: &Scalar) -> SheafMorphism {
        a.scale(c)
    }

    fn is_zero(&self, a: &SheafMorphism) -> bool {
        a.is_zero()
    }

    fn identity(&self, l: &Label) -> SheafMorphism {
        self.mask(SheafMorphism::identity(&self.objects[l.0]))
    }

    fn iso_scalar(&self, l: &Label, a: &SheafMorphism) -> Scalar {
        let m = &a.vertex[l.0];
        if m.rows == 0 || m.cols == 0 {
            return Scalar::zero();
        }
        m.get(0, 0).constant_term()
    }

    fn twist(&self, l: &Label, n: i32) -> Label {
        (l.0, l.1 + n)
    }
}

/// Graded free R-modules R{n}; arrows are single polynomials.
pub struct FreeCtx {
    pub nvars: usize,
}

impl Additive for FreeCtx {
    type Label = i32;
    type Arrow = Poly;

    fn compose(&self, g: &Poly, f: &Poly) -> Poly {
        g.mul(f)
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    fn scale(&self, a: &Poly, c: &Scalar) -> Poly {
        a.scale(c)
    }

    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }

    fn identity(&self, _: &i32) -> Poly {
        Poly::one(self.nvars)
    }

    fn iso_scalar(&self, _: &i32, a: &Poly) -> Scalar {
        a.constant_term()
    }

    fn twist(&self, l: &i32, n: i32) -> i32 {
        l + n
    }
}

impl BmpCtx<'_> {
    /// The arrow E_x{a} → E_y{b} with the given vertex components.
    pub fn arrow_between(
        &self,
        src: Label,
        tgt: Label,
        comps: &[(usize, PolyMatrix)],
    ) -> SheafMorphism {
        self.arrow(src.0, tgt.0, tgt.1 - src.1, comps)
    }
}
