//! Bounded complexes in an additive category given by labelled objects and arrows.

use crate::error::{Error, Result};
use crate::polyalg::Scalar;
use std::collections::BTreeMap;
use std::fmt::Debug;

/// An additive category whose objects are direct sums of labelled indecomposables.
pub trait Additive {
    type Label: Clone + Ord + Debug;
    type Arrow: Clone + Debug + PartialEq;

    /// g ∘ f.
    fn compose(&self, g: &Self::Arrow, f: &Self::Arrow) -> Self::Arrow;
    fn add(&self, a: &Self::Arrow, b: &Self::Arrow) -> Self::Arrow;
    fn scale(&self, a: &Self::Arrow, c: &Scalar) -> Self::Arrow;
    fn is_zero(&self, a: &Self::Arrow) -> bool;
    fn identity(&self, l: &Self::Label) -> Self::Arrow;
    /// For a degree-0 endomorphism of an indecomposable: the scalar c with a = c·id + radical.
    fn iso_scalar(&self, l: &Self::Label, a: &Self::Arrow) -> Scalar;
    /// The label of X{n}.
    fn twist(&self, l: &Self::Label, n: i32) -> Self::Label;
}

/// Sparse block matrix of arrows; `None` is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Block<A> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Option<A>>,
}

impl<A: Clone> Block<A> {
    pub fn zero(rows: usize, cols: usize) -> Block<A> {
        Block {
            rows,
            cols,
            data: vec![None; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&A> {
        self.data[i * self.cols + j].as_ref()
    }

    pub fn set(&mut self, i: usize, j: usize, a: Option<A>) {
        self.data[i * self.cols + j] = a;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &A)> {
        self.data
            .iter()
            .enumerate()
            .filter_map(move |(k, a)| a.as_ref().map(|a| (k / self.cols, k % self.cols, a)))
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Block<A> {
        let mut b = Block::zero(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                b.set(i, j, self.get(r, c).cloned());
            }
        }
        b
    }
}

/// Block-matrix arithmetic over a context.
pub struct Ops<'a, C: Additive>(pub &'a C);

impl<C: Additive> Ops<'_, C> {
    pub fn add_opt(&self, a: Option<C::Arrow>, b: Option<&C::Arrow>) -> Option<C::Arrow> {
        match (a, b) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => Some(self.0.add(&a, b)).filter(|s| !self.0.is_zero(s)),
        }
    }

    /// g · f.
    pub fn mul(&self, g: &Block<C::Arrow>, f: &Block<C::Arrow>) -> Block<C::Arrow> {
        assert_eq!(g.cols, f.rows);
        let mut out = Block::zero(g.rows, f.cols);
        for (i, k, a) in g.entries() {
            for j in 0..f.cols {
                if let Some(b) = f.get(k, j) {
                    let c = self.0.compose(a, b);
                    if !self.0.is_zero(&c) {
                        let cur = out.data[i * f.cols + j].take();
                        out.data[i * f.cols + j] = self.add_opt(cur, Some(&c));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, a: &Block<C::Arrow>, b: &Block<C::Arrow>) -> Block<C::Arrow> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        Block {
            rows: a.rows,
            cols: a.cols,
            data: a
                .data
                .iter()
                .zip(&b.data)
                .map(|(x, y)| self.add_opt(x.clone(), y.as_ref()))
                .collect(),
        }
    }

    pub fn scale(&self, a: &Block<C::Arrow>, c: &Scalar) -> Block<C::Arrow> {
        if c.is_zero() {
            return Block::zero(a.rows, a.cols);
        }
        Block {
            rows: a.rows,
            cols: a.cols,
            data: a
                .data
                .iter()
                .map(|x| x.as_ref().map(|x| self.0.scale(x, c)))
                .collect(),
        }
    }

    pub fn neg(&self, a: &Block<C::Arrow>) -> Block<C::Arrow> {
        self.scale(a, &Scalar::from_i64(-1))
    }

    pub fn is_zero(&self, a: &Block<C::Arrow>) -> bool {
        a.entries().all(|(_, _, x)| self.0.is_zero(x))
    }

    pub fn identity(&self, labels: &[C::Label]) -> Block<C::Arrow> {
        let mut b = Block::zero(labels.len(), labels.len());
        for (i, l) in labels.iter().enumerate() {
            b.set(i, i, Some(self.0.identity(l)));
        }
        b
    }

    /// [[a, b], [c, d]] with the given row/column splits.
    pub fn join(
        &self,
        a: &Block<C::Arrow>,
        b: &Block<C::Arrow>,
        c: &Block<C::Arrow>,
        d: &Block<C::Arrow>,
    ) -> Block<C::Arrow> {
        let (r0, c0) = (a.rows, a.cols);
        let mut out = Block::zero(a.rows + c.rows, a.cols + b.cols);
        for (m, ro, co) in [(a, 0, 0), (b, 0, c0), (c, r0, 0), (d, r0, c0)] {
            for (i, j, x) in m.entries() {
                out.set(ro + i, co + j, Some(x.clone()));
            }
        }
        out
    }
}

/// A bounded complex: terms[k] sits in cohomological degree lo + k; d[k]: terms[k] → terms[k+1].
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<L, A> {
    pub lo: i32,
    pub terms: Vec<Vec<L>>,
    pub d: Vec<Block<A>>,
}

impl<L: Clone + Ord + Debug, A: Clone + Debug + PartialEq> Complex<L, A> {
    pub fn zero() -> Self {
        Complex {
            lo: 0,
            terms: vec![],
            d: vec![],
        }
    }

    /// A single object in degree i.
    pub fn single(labels: Vec<L>, i: i32) -> Self {
        Complex {
            lo: i,
            terms: vec![labels],
            d: vec![],
        }
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn term(&self, i: i32) -> &[L] {
        let k = i - self.lo;
        if k < 0 || k as usize >= self.terms.len() {
            &[]
        } else {
            &self.terms[k as usize]
        }
    }

    /// d^i: C^i → C^{i+1}.
    pub fn diff(&self, i: i32) -> Block<A> {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.d.len() {
            self.d[k as usize].clone()
        } else {
            Block::zero(self.term(i + 1).len(), self.term(i).len())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    pub fn len(&self) -> usize {
        self.terms.iter().map(|t| t.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Builds from degree-indexed terms and differentials, trimming empty ends.
    pub fn from_parts(mut terms: BTreeMap<i32, Vec<L>>, mut d: BTreeMap<i32, Block<A>>) -> Self {
        terms.retain(|_, t| !t.is_empty());
        let (Some(&lo), Some(&hi)) = (terms.keys().next(), terms.keys().next_back()) else {
            return Complex::zero();
        };
        let ts: Vec<Vec<L>> = (lo..=hi)
            .map(|i| terms.remove(&i).unwrap_or_default())
            .collect();
        let ds = (lo..hi)
            .map(|i| {
                let (r, c) = (ts[(i + 1 - lo) as usize].len(), ts[(i - lo) as usize].len());
                d.remove(&i)
                    .filter(|b| b.rows == r && b.cols == c)
                    .unwrap_or_else(|| Block::zero(r, c))
            })
            .collect();
        Complex {
            lo,
            terms: ts,
            d: ds,
        }
    }

    /// Multiset of (degree, label).
    pub fn label_multiset(&self) -> Vec<(i32, L)> {
        let mut v: Vec<(i32, L)> = (self.lo..=self.hi())
            .flat_map(|i| self.term(i).iter().map(move |l| (i, l.clone())))
            .collect();
        v.sort();
        v
    }
}

pub type Cx<C> = Complex<<C as Additive>::Label, <C as Additive>::Arrow>;

/// A map of complexes C → D raising cohomological degree by `degree` (0 for chain maps, −1 for homotopies).
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap<A> {
    pub degree: i32,
    pub blocks: BTreeMap<i32, Block<A>>,
}

impl<A: Clone> ChainMap<A> {
    pub fn block<L>(&self, i: i32, src: &Complex<L, A>, tgt: &Complex<L, A>) -> Block<A>
    where
        L: Clone + Ord + Debug,
        A: Debug + PartialEq,
    {
        self.blocks
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Block::zero(tgt.term(i + self.degree).len(), src.term(i).len()))
    }
}

impl<C: Additive> Ops<'_, C> {
    pub fn check_d2(&self, c: &Cx<C>) -> Result<()> {
        for i in c.lo..c.hi() {
            if !self.is_zero(&self.mul(&c.diff(i + 1), &c.diff(i))) {
                return Err(Error::Invariant(format!("d∘d ≠ 0 at degree {i}")));
            }
        }
        Ok(())
    }

    /// C[m]: (C[m])^i = C^{i+m}, differential times (−1)^m.
    pub fn shift(&self, c: &Cx<C>, m: i32) -> Cx<C> {
        let sign = if m % 2 == 0 {
            Scalar::one()
        } else {
            Scalar::from_i64(-1)
        };
        Complex {
            lo: c.lo - m,
            terms: c.terms.clone(),
            d: c.d.iter().map(|b| self.scale(b, &sign)).collect(),
        }
    }

    /// C{n}: every label twisted.
    pub fn twist(&self, c: &Cx<C>, n: i32) -> Cx<C> {
        Complex {
            lo: c.lo,
            terms: c
                .terms
                .iter()
                .map(|t| t.iter().map(|l| self.0.twist(l, n)).collect())
                .collect(),
            d: c.d.clone(),
        }
    }

    /// ⟨1⟩ = {−1}[1].
    pub fn tate(&self, c: &Cx<C>) -> Cx<C> {
        self.shift(&self.twist(c, -1), 1)
    }

    pub fn direct_sum(&self, a: &Cx<C>, b: &Cx<C>) -> Cx<C> {
        let lo = a.lo.min(b.lo);
        let hi = a.hi().max(b.hi());
        let mut terms = BTreeMap::new();
        let mut d = BTreeMap::new();
        for i in lo..=hi {
            terms.insert(i, a.term(i).iter().chain(b.term(i)).cloned().collect());
            let z1 = Block::zero(a.term(i + 1).len(), b.term(i).len());
            let z2 = Block::zero(b.term(i + 1).len(), a.term(i).len());
            d.insert(i, self.join(&a.diff(i), &z1, &z2, &b.diff(i)));
        }
        Complex::from_parts(terms, d)
    }

    /// Cone(f)^k = C^{k+1} ⊕ D^k with d = [[−d_C, 0], [f, d_D]].
    pub fn cone(&self, c: &Cx<C>, dd: &Cx<C>, f: &ChainMap<C::Arrow>) -> Cx<C> {
        let lo = (c.lo - 1).min(dd.lo);
        let hi = (c.hi() - 1).max(dd.hi());
        let mut terms = BTreeMap::new();
        let mut d = BTreeMap::new();
        for k in lo..=hi {
            terms.insert(k, c.term(k + 1).iter().chain(dd.term(k)).cloned().collect());
            let z = Block::zero(c.term(k + 2).len(), dd.term(k).len());
            d.insert(
                k,
                self.join(
                    &self.neg(&c.diff(k + 1)),
                    &z,
                    &f.block(k + 1, c, dd),
                    &dd.diff(k),
                ),
            );
        }
        Complex::from_parts(terms, d)
    }

    /// Whether f: C → D commutes with the differentials.
    pub fn is_chain_map(&self, c: &Cx<C>, dd: &Cx<C>, f: &ChainMap<C::Arrow>) -> bool {
        let lo = c.lo.min(dd.lo) - 1;
        let hi = c.hi().max(dd.hi()) + 1;
        (lo..=hi).all(|i| {
            let a = self.mul(&dd.diff(i + f.degree), &f.block(i, c, dd));
            let b = self.mul(&f.block(i + 1, c, dd), &c.diff(i));
            let b = if f.degree % 2 == 0 { b } else { self.neg(&b) };
            self.is_zero(&self.add(&a, &self.neg(&b)))
        })
    }

    /// g ∘ f for maps A → B → C.
    pub fn compose_maps(
        &self,
        g: &ChainMap<C::Arrow>,
        f: &ChainMap<C::Arrow>,
        a: &Cx<C>,
        b: &Cx<C>,
        c: &Cx<C>,
    ) -> ChainMap<C::Arrow> {
        let mut blocks = BTreeMap::new();
        for i in a.lo..=a.hi() {
            let m = self.mul(&g.block(i + f.degree, b, c), &f.block(i, a, b));
            if !self.is_zero(&m) {
                blocks.insert(i, m);
            }
        }
        ChainMap {
            degree: f.degree + g.degree,
            blocks,
        }
    }

    pub fn identity_map(&self, c: &Cx<C>) -> ChainMap<C::Arrow> {
        ChainMap {
            degree: 0,
            blocks: (c.lo..=c.hi())
                .map(|i| (i, self.identity(c.term(i))))
                .collect(),
        }
    }

    pub fn add_maps(
        &self,
        f: &ChainMap<C::Arrow>,
        g: &ChainMap<C::Arrow>,
        a: &Cx<C>,
        b: &Cx<C>,
    ) -> ChainMap<C::Arrow> {
        let keys: std::collections::BTreeSet<i32> =
            f.blocks.keys().chain(g.blocks.keys()).copied().collect();
        ChainMap {
            degree: f.degree,
            blocks: keys
                .into_iter()
                .map(|i| (i, self.add(&f.block(i, a, b), &g.block(i, a, b))))
                .collect(),
        }
    }

    /// Whether f − g = dh + hd.
    pub fn is_homotopy(
        &self,
        f: &ChainMap<C::Arrow>,
        g: &ChainMap<C::Arrow>,
        h: &ChainMap<C::Arrow>,
        a: &Cx<C>,
        b: &Cx<C>,
    ) -> bool {
        let lo = a.lo.min(b.lo) - 1;
        let hi = a.hi().max(b.hi()) + 1;
        (lo..=hi).all(|i| {
            let lhs = self.add(&f.block(i, a, b), &self.neg(&g.block(i, a, b)));
            let rhs = self.add(
                &self.mul(&b.diff(i - 1), &h.block(i, a, b)),
                &self.mul(&h.block(i + 1, a, b), &a.diff(i)),
            );
            self.is_zero(&self.add(&lhs, &self.neg(&rhs)))
        })
    }
}

/// A homotopy equivalence C ⇄ C' with f∘g = 1 and g∘f − 1 = dh + hd.
#[derive(Clone, Debug)]
pub struct Reduction<L, A> {
    pub complex: Complex<L, A>,
    pub f: ChainMap<A>,
    pub g: ChainMap<A>,
    pub h: ChainMap<A>,
}

fn remove_index<T: Clone>(v: &[T], i: usize) -> Vec<T> {
    v.iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|(_, x)| x.clone())
        .collect()
}

impl<C: Additive> Ops<'_, C> {
    fn find_iso(&self, c: &Cx<C>) -> Option<(i32, usize, usize, Scalar)> {
        for i in c.lo..c.hi() {
            let d = c.diff(i);
            for (r, col, a) in d.entries() {
                let (src, tgt) = (&c.term(i)[col], &c.term(i + 1)[r]);
                if src == tgt {
                    let s = self.0.iso_scalar(src, a);
                    if !s.is_zero() {
                        return Some((i, r, col, s));
                    }
                }
            }
        }
        None
    }

    /// Gaussian elimination of every invertible component between equal labels.
    pub fn minimize(&self, c: &Cx<C>) -> Cx<C> {
        let mut cur = c.clone();
        while let Some((i, r, col, s)) = self.find_iso(&cur) {
            cur = self.eliminate(&cur, i, r, col, &s).0;
        }
        self.trim(cur)
    }

    /// Minimization together with the equivalence data.
    pub fn minimize_tracked(&self, c: &Cx<C>) -> Reduction<C::Label, C::Arrow> {
        let mut cur = c.clone();
        let mut f = self.identity_map(c);
        let mut g = self.identity_map(c);
        let mut h = ChainMap {
            degree: -1,
            blocks: BTreeMap::new(),
        };
        while let Some((i, r, col, s)) = self.find_iso(&cur) {
            let (next, fs, gs, hs) = self.eliminate(&cur, i, r, col, &s);
            let gh = self.compose_maps(&g, &hs, &cur, &cur, c);
            let ghf = self.compose_maps(&gh, &f, c, &cur, c);
            h = self.add_maps(&h, &ghf, c, c);
            f = self.compose_maps(&fs, &f, c, &cur, &next);
            g = self.compose_maps(&g, &gs, &next, &cur, c);
            cur = next;
        }
        let complex = self.trim(cur);
        Reduction { complex, f, g, h }
    }

    fn trim(&self, c: Cx<C>) -> Cx<C> {
        let terms = (c.lo..=c.hi()).map(|i| (i, c.term(i).to_vec())).collect();
        let d = (c.lo..c.hi()).map(|i| (i, c.diff(i))).collect();
        Complex::from_parts(terms, d)
    }

    /// One elimination step at d^i[r][col] = s·id + radical.
    #[allow(clippy::type_complexity)]
    fn eliminate(
        &self,
        c: &Cx<C>,
        i: i32,
        r: usize,
        col: usize,
        _s: &Scalar,
    ) -> (
        Cx<C>,
        ChainMap<C::Arrow>,
        ChainMap<C::Arrow>,
        ChainMap<C::Arrow>,
    ) {
        let d = c.diff(i);
        let label = c.term(i)[col].clone();
        let phi = d.get(r, col).unwrap();
        let inv = self.0.iso_scalar(&label, phi).inv().unwrap();
        // φ is c·id exactly on a degree-0 endomorphism of an indecomposable
        let phi_inv = self.0.scale(&self.0.identity(&label), &inv);
        let (ni, nj) = (c.term(i).len(), c.term(i + 1).len());
        let rest_i: Vec<usize> = (0..ni).filter(|&k| k != col).collect();
        let rest_j: Vec<usize> = (0..nj).filter(|&k| k != r).collect();
        let delta = d.select(&[r], &rest_i);
        let gamma = d.select(&rest_j, &[col]);
        let eps = d.select(&rest_j, &rest_i);
        let mut pinv = Block::zero(1, 1);
        pinv.set(0, 0, Some(phi_inv.clone()));
        let gp = self.mul(&gamma, &pinv);
        let new_d = self.add(&eps, &self.neg(&self.mul(&gp, &delta)));
        let mut terms: BTreeMap<i32, Vec<C::Label>> =
            (c.lo..=c.hi()).map(|k| (k, c.term(k).to_vec())).collect();
        terms.insert(i, remove_index(c.term(i), col));
        terms.insert(i + 1, remove_index(c.term(i + 1), r));
        let mut ds: BTreeMap<i32, Block<C::Arrow>> =
            (c.lo..c.hi()).map(|k| (k, c.diff(k))).collect();
        ds.insert(i, new_d);
        let all = |n: usize| (0..n).collect::<Vec<_>>();
        if i > c.lo {
            let prev = c.diff(i - 1);
            ds.insert(i - 1, prev.select(&rest_i, &all(prev.cols)));
        }
        if i + 1 < c.hi() {
            let next = c.diff(i + 1);
            ds.insert(i + 1, next.select(&all(next.rows), &rest_j));
        }
        let next = Complex {
            lo: c.lo,
            terms: (c.lo..=c.hi()).map(|k| terms.remove(&k).unwrap()).collect(),
            d: (c.lo..c.hi()).map(|k| ds.remove(&k).unwrap()).collect(),
        };
        // f: C → C'
        let mut fb = BTreeMap::new();
        let mut gb = BTreeMap::new();
        for k in c.lo..=c.hi() {
            let n = c.term(k).len();
            if k == i {
                fb.insert(k, self.identity(c.term(k)).select(&rest_i, &all(n)));
                let mut top = self.neg(&self.mul(&pinv, &delta));
                top = Block {
                    rows: 1,
                    cols: rest_i.len(),
                    data: top.data,
                };
                let id = self.identity(next.term(k));
                gb.insert(k, self.insert_row(&id, col, &top));
            } else if k == i + 1 {
                let id = self.identity(next.term(k));
                let neg_gp = self.neg(&gp);
                fb.insert(k, self.insert_col(&id, r, &neg_gp));
                gb.insert(k, self.identity(c.term(k)).select(&all(n), &rest_j));
            } else {
                fb.insert(k, self.identity(c.term(k)));
                gb.insert(k, self.identity(c.term(k)));
            }
        }
        let mut hb = Block::zero(ni, nj);
        hb.set(col, r, Some(self.0.scale(&phi_inv, &Scalar::from_i64(-1))));
        let h = ChainMap {
            degree: -1,
            blocks: [(i + 1, hb)].into_iter().collect(),
        };
        (
            next,
            ChainMap {
                degree: 0,
                blocks: fb,
            },
            ChainMap {
                degree: 0,
                blocks: gb,
            },
            h,
        )
    }

    fn insert_row(&self, m: &Block<C::Arrow>, at: usize, row: &Block<C::Arrow>) -> Block<C::Arrow> {
        let mut out = Block::zero(m.rows + 1, m.cols);
        for (i, j, a) in m.entries() {
            out.set(if i < at { i } else { i + 1 }, j, Some(a.clone()));
        }
        for (_, j, a) in row.entries() {
            out.set(at, j, Some(a.clone()));
        }
        out
    }

    fn insert_col(&self, m: &Block<C::Arrow>, at: usize, col: &Block<C::Arrow>) -> Block<C::Arrow> {
        let mut out = Block::zero(m.rows, m.cols + 1);
        for (i, j, a) in m.entries() {
            out.set(i, if j < at { j } else { j + 1 }, Some(a.clone()));
        }
        for (i, _, a) in col.entries() {
            out.set(i, at, Some(a.clone()));
        }
        out
    }
}
