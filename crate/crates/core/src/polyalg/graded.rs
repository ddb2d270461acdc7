//! Graded free modules, polynomial matrices and degreewise linear algebra.
//!
//! Convention: the generator of R{n} sits in internal degree −n, so an element p·e_k of
//! ⊕ R{n_k} has degree deg(p) − n_k.

use super::linalg::{kernel, Echelon, SparseVec};
use super::poly::{count_monomials, monomials, Monomial, Poly};
use super::scalar::Scalar;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::sync::Mutex;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedFreeModule {
    pub shifts: Vec<i32>,
    pub annihilator: Option<Poly>,
}

impl GradedFreeModule {
    pub fn free(shifts: Vec<i32>) -> GradedFreeModule {
        GradedFreeModule {
            shifts,
            annihilator: None,
        }
    }

    pub fn quotient(shifts: Vec<i32>, alpha: Poly) -> GradedFreeModule {
        GradedFreeModule {
            shifts,
            annihilator: Some(alpha),
        }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_zero(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn graded_dim(&self, nvars: usize, d: i32) -> usize {
        self.shifts
            .iter()
            .map(|&n| {
                let t = d + n;
                if t.rem_euclid(2) != 0 {
                    return 0;
                }
                let k = (t / 2) as i64;
                match &self.annihilator {
                    None => count_monomials(nvars, k),
                    Some(_) => count_monomials(nvars, k) - count_monomials(nvars, k - 1),
                }
            })
            .sum()
    }

    pub fn shifted(&self, n: i32) -> GradedFreeModule {
        GradedFreeModule {
            shifts: self.shifts.iter().map(|s| s + n).collect(),
            annihilator: self.annihilator.clone(),
        }
    }

    /// Generator degrees, the negated shifts.
    pub fn generator_degrees(&self) -> Vec<i32> {
        self.shifts.iter().map(|s| -s).collect()
    }
}

/// A linear annihilator together with the variable it eliminates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Annihilator {
    pub poly: Poly,
    pub var: usize,
    pub coeffs: Vec<Scalar>,
}

impl Annihilator {
    pub fn new(alpha: &Poly) -> Result<Annihilator> {
        let coeffs = alpha.linear_coeffs().ok_or(Error::ZeroLabel)?;
        let var = coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroLabel)?;
        Ok(Annihilator {
            poly: alpha.clone(),
            var,
            coeffs,
        })
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        p.reduce_mod_var(self.var, &self.coeffs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Comp {
    pub shift: i32,
    pub ann: Option<Arc<Annihilator>>,
}

/// A direct sum of components R{n} or (R/α){n}; coordinates for degree pieces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub nvars: usize,
    pub comps: Vec<Comp>,
}

impl Ambient {
    pub fn new(nvars: usize) -> Ambient {
        Ambient {
            nvars,
            comps: Vec::new(),
        }
    }

    pub fn free(nvars: usize, shifts: &[i32]) -> Ambient {
        Ambient {
            nvars,
            comps: shifts
                .iter()
                .map(|&shift| Comp { shift, ann: None })
                .collect(),
        }
    }

    pub fn from_module(nvars: usize, m: &GradedFreeModule) -> Result<Ambient> {
        let mut a = Ambient::new(nvars);
        a.push_module(m)?;
        Ok(a)
    }

    pub fn push_module(&mut self, m: &GradedFreeModule) -> Result<()> {
        let ann = match &m.annihilator {
            Some(p) => Some(Arc::new(Annihilator::new(p)?)),
            None => None,
        };
        for &shift in &m.shifts {
            self.comps.push(Comp {
                shift,
                ann: ann.clone(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Polynomial degree of component k in internal degree d, if any.
    pub fn poly_degree(&self, k: usize, d: i32) -> Option<u32> {
        let t = d + self.comps[k].shift;
        (t >= 0 && t % 2 == 0).then_some((t / 2) as u32)
    }

    fn comp_basis(&self, k: usize, d: i32) -> Option<Arc<super::poly::MonomialBasis>> {
        let pd = self.poly_degree(k, d)?;
        let avoid = self.comps[k].ann.as_ref().map(|a| a.var);
        Some(monomials(self.nvars, pd, avoid))
    }

    pub fn offsets(&self, d: i32) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.comps.len() + 1);
        let mut acc = 0;
        for k in 0..self.comps.len() {
            out.push(acc);
            acc += self.comp_basis(k, d).map(|b| b.len()).unwrap_or(0);
        }
        out.push(acc);
        out
    }

    pub fn dim(&self, d: i32) -> usize {
        *self.offsets(d).last().unwrap()
    }

    pub fn zero_elem(&self) -> Vec<Poly> {
        vec![Poly::zero(self.nvars); self.comps.len()]
    }

    pub fn reduce(&self, e: &[Poly]) -> Vec<Poly> {
        e.iter()
            .zip(&self.comps)
            .map(|(p, c)| match &c.ann {
                Some(a) => a.reduce(p),
                None => p.clone(),
            })
            .collect()
    }

    /// Coordinates of a reduced homogeneous element of degree d.
    pub fn encode(&self, e: &[Poly], d: i32) -> SparseVec {
        let offs = self.offsets(d);
        let mut out = Vec::new();
        for (k, p) in e.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let basis = self
                .comp_basis(k, d)
                .unwrap_or_else(|| panic!("component {k} has no degree {d} piece"));
            let mut local: Vec<(usize, Scalar)> = p
                .terms()
                .iter()
                .map(|(m, c)| {
                    let i = *basis
                        .index
                        .get(m)
                        .unwrap_or_else(|| panic!("monomial {m:?} outside degree {d} piece"));
                    (offs[k] + i, c.clone())
                })
                .collect();
            local.sort_by_key(|x| x.0);
            out.extend(local);
        }
        SparseVec(out)
    }

    /// Reduces then encodes.
    pub fn encode_reduced(&self, e: &[Poly], d: i32) -> SparseVec {
        self.encode(&self.reduce(e), d)
    }

    pub fn decode(&self, v: &SparseVec, d: i32) -> Vec<Poly> {
        let offs = self.offsets(d);
        let mut terms: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); self.comps.len()];
        for (i, c) in &v.0 {
            let k = offs.partition_point(|&o| o <= *i) - 1;
            let basis = self.comp_basis(k, d).unwrap();
            terms[k].push((basis.monos[i - offs[k]].clone(), c.clone()));
        }
        terms
            .into_iter()
            .map(|t| Poly::from_map(self.nvars, t))
            .collect()
    }

    /// Basis of the degree-d piece as elements.
    pub fn basis(&self, d: i32) -> Vec<Vec<Poly>> {
        let mut out = Vec::new();
        for k in 0..self.comps.len() {
            if let Some(b) = self.comp_basis(k, d) {
                for m in &b.monos {
                    let mut e = self.zero_elem();
                    e[k] = Poly::term(self.nvars, m.clone(), Scalar::one());
                    out.push(e);
                }
            }
        }
        out
    }

    /// Basis of the degree-d piece as (component, monomial) pairs.
    pub fn basis_monomials(&self, d: i32) -> Vec<(usize, Monomial)> {
        let mut out = Vec::new();
        for k in 0..self.comps.len() {
            if let Some(b) = self.comp_basis(k, d) {
                out.extend(b.monos.iter().map(|m| (k, m.clone())));
            }
        }
        out
    }
}

pub fn elem_is_zero(e: &[Poly]) -> bool {
    e.iter().all(|p| p.is_zero())
}

pub fn elem_add(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn elem_scale(a: &[Poly], p: &Poly) -> Vec<Poly> {
    a.iter().map(|x| x.mul(p)).collect()
}

/// Dense matrix of polynomials, rows = target components, columns = source components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub nvars: usize,
    pub data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize, nvars: usize) -> PolyMatrix {
        PolyMatrix {
            rows,
            cols,
            nvars,
            data: vec![Poly::zero(nvars); rows * cols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(n, n, nvars);
        for i in 0..n {
            m.data[i * n + i] = Poly::one(nvars);
        }
        m
    }

    pub fn from_columns(rows: usize, nvars: usize, cols: &[Vec<Poly>]) -> PolyMatrix {
        let mut m = PolyMatrix::zero(rows, cols.len(), nvars);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, p) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = p.clone();
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = PolyMatrix::zero(self.rows, o.cols, self.nvars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &PolyMatrix) -> PolyMatrix {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|p| p.neg())
    }

    pub fn scale(&self, s: &Scalar) -> PolyMatrix {
        self.map(|p| p.scale(s))
    }

    pub fn scale_poly(&self, q: &Poly) -> PolyMatrix {
        self.map(|p| p.mul(q))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Rows r0..r1 and columns c0..c1.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(r1 - r0, c1 - c0, self.nvars);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        m
    }

    /// Checks homogeneity: entry (i,j) has internal degree tgt_i − src_j + δ or is zero.
    pub fn is_homogeneous(&self, src: &[i32], tgt: &[i32], delta: i32) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let p = self.get(i, j);
                p.is_zero() || p.degree() == Some(tgt[i] - src[j] + delta)
            })
        })
    }
}

/// Kernel of the degree-d piece of a linear map given on basis elements (component, monomial).
pub fn kernel_in_degree_fn(
    src: &Ambient,
    tgt: &Ambient,
    d: i32,
    tgt_degree: i32,
    f: impl Fn(usize, &Poly) -> Vec<Poly>,
) -> Vec<Vec<Poly>> {
    let basis = src.basis_monomials(d);
    let images: Vec<SparseVec> = basis
        .iter()
        .map(|(k, m)| {
            let img = f(*k, &Poly::term(src.nvars, m.clone(), Scalar::one()));
            tgt.encode_reduced(&img, tgt_degree)
        })
        .collect();
    kernel(&images)
        .into_iter()
        .map(|v| src.decode(&v, d))
        .collect()
}

/// Kernel of a matrix map of internal degree δ restricted to degree d.
pub fn kernel_in_degree(
    m: &PolyMatrix,
    src: &Ambient,
    tgt: &Ambient,
    delta: i32,
    d: i32,
) -> Vec<Vec<Poly>> {
    kernel_in_degree_fn(src, tgt, d, d + delta, |k, mono| {
        (0..m.rows).map(|i| m.get(i, k).mul(mono)).collect()
    })
}

/// Minimal generators of a submodule of `ambient` given degreewise by `provider` over [lo, hi].
/// Fails with WindowNotStabilized if generators appear in the top two degrees.
pub fn minimal_generators(
    ambient: &Ambient,
    lo: i32,
    hi: i32,
    mut provider: impl FnMut(i32) -> Result<Vec<Vec<Poly>>>,
) -> Result<Vec<(i32, Vec<Poly>)>> {
    let mut gens = Vec::new();
    let mut pieces: BTreeMap<i32, Vec<Vec<Poly>>> = BTreeMap::new();
    for d in lo..=hi {
        let basis = provider(d)?;
        let mut ech = Echelon::new();
        if let Some(prev) = pieces.get(&(d - 2)) {
            for e in prev {
                for i in 0..ambient.nvars {
                    let x = Poly::var(ambient.nvars, i);
                    let _ = ech.insert(&ambient.encode_reduced(&elem_scale(e, &x), d));
                }
            }
        }
        for b in &basis {
            if ech.insert(&ambient.encode_reduced(b, d)).is_ok() {
                if d >= hi - 1 {
                    return Err(Error::WindowNotStabilized { lo, hi });
                }
                gens.push((d, ambient.reduce(b)));
            }
        }
        pieces.insert(d, basis);
    }
    Ok(gens)
}

/// The degree-d piece of the R-span of `gens`, as an echelon in ambient coordinates.
pub fn span_in_degree(ambient: &Ambient, gens: &[(i32, Vec<Poly>)], d: i32) -> Echelon {
    let mut e = Echelon::new();
    for (g, v) in gens {
        let t = d - g;
        if t < 0 || t % 2 != 0 {
            continue;
        }
        for m in &monomials(ambient.nvars, (t / 2) as u32, None).monos {
            let p = Poly::term(ambient.nvars, m.clone(), Scalar::one());
            let _ = e.insert(&ambient.encode_reduced(&elem_scale(v, &p), d));
        }
    }
    e
}

/// Checks that R·gens is free on gens in degrees [lo, hi] by comparing dimensions.
pub fn spans_freely(ambient: &Ambient, gens: &[(i32, Vec<Poly>)], lo: i32, hi: i32) -> bool {
    (lo..=hi).all(|d| {
        let expect: usize = gens
            .iter()
            .map(|(g, _)| {
                let t = d - g;
                if t < 0 || t % 2 != 0 {
                    0
                } else {
                    count_monomials(ambient.nvars, (t / 2) as i64)
                }
            })
            .sum();
        span_in_degree(ambient, gens, d).rank() == expect
    })
}

/// Expresses elements of an R-span in terms of its generators, one cached echelon per degree.
pub struct SpanSolver {
    pub ambient: Ambient,
    pub gens: Vec<(i32, Vec<Poly>)>,
    cache: Mutex<HashMap<i32, Arc<(Echelon, Vec<(usize, Monomial)>)>>>,
}

impl Clone for SpanSolver {
    fn clone(&self) -> SpanSolver {
        SpanSolver::new(self.ambient.clone(), self.gens.clone())
    }
}

impl std::fmt::Debug for SpanSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpanSolver")
            .field("gens", &self.gens)
            .finish()
    }
}

impl SpanSolver {
    pub fn new(ambient: Ambient, gens: Vec<(i32, Vec<Poly>)>) -> SpanSolver {
        SpanSolver {
            ambient,
            gens,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn piece(&self, d: i32) -> Arc<(Echelon, Vec<(usize, Monomial)>)> {
        if let Some(p) = self.cache.lock().unwrap().get(&d) {
            return p.clone();
        }
        let n = self.ambient.nvars;
        let mut e = Echelon::tracking();
        let mut labels = Vec::new();
        for (j, (g, v)) in self.gens.iter().enumerate() {
            let t = d - g;
            if t < 0 || t % 2 != 0 {
                continue;
            }
            for m in &monomials(n, (t / 2) as u32, None).monos {
                let p = Poly::term(n, m.clone(), Scalar::one());
                let _ = e.insert(&self.ambient.encode_reduced(&elem_scale(v, &p), d));
                labels.push((j, m.clone()));
            }
        }
        let p = Arc::new((e, labels));
        self.cache.lock().unwrap().insert(d, p.clone());
        p
    }

    /// Coefficients c_j with Σ c_j gen_j = target (target homogeneous of degree d).
    pub fn express(&self, target: &[Poly], d: i32) -> Option<Vec<Poly>> {
        let n = self.ambient.nvars;
        let mut out = vec![Poly::zero(n); self.gens.len()];
        if elem_is_zero(&self.ambient.reduce(target)) {
            return Some(out);
        }
        let piece = self.piece(d);
        let comb = piece.0.solve(&self.ambient.encode_reduced(target, d))?;
        for (i, c) in &comb.0 {
            let (j, m) = &piece.1[*i];
            out[*j] = out[*j].add(&Poly::term(n, m.clone(), c.clone()));
        }
        Some(out)
    }

    pub fn contains(&self, target: &[Poly], d: i32) -> bool {
        self.express(target, d).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::scalar::Field;

    fn p2(s: &str) -> Poly {
        Poly::parse_default(s, 2, Field::Rational).unwrap()
    }

    #[test]
    fn graded_dims() {
        assert_eq!(GradedFreeModule::free(vec![0]).graded_dim(2, 4), 3);
        assert_eq!(GradedFreeModule::free(vec![1]).graded_dim(2, -1), 1);
        assert_eq!(
            GradedFreeModule::quotient(vec![1], p2("x1")).graded_dim(2, 1),
            1
        );
        assert_eq!(GradedFreeModule::free(vec![0]).graded_dim(2, 1), 0);
    }

    #[test]
    fn kernel_examples() {
        let one = Ambient::free(2, &[0]);
        let id = PolyMatrix::identity(1, 2);
        for d in 0..6 {
            assert!(kernel_in_degree(&id, &one, &one, 0, d).is_empty());
        }
        // (a, b) -> a - b mod α_s on R{1}² -> (R/α_s){1}
        let src = Ambient::free(2, &[1, 1]);
        let tgt = Ambient::from_module(2, &GradedFreeModule::quotient(vec![1], p2("x1"))).unwrap();
        let mut m = PolyMatrix::zero(1, 2, 2);
        m.set(0, 0, Poly::one(2));
        m.set(0, 1, Poly::one(2).neg());
        let k = kernel_in_degree(&m, &src, &tgt, 0, -1);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], k[0][1]);
        // multiplication by α_s
        let mut a = PolyMatrix::zero(1, 1, 2);
        a.set(0, 0, p2("x1"));
        assert!(kernel_in_degree(&a, &one, &Ambient::free(2, &[2]), 0, 0).is_empty());
    }

    #[test]
    fn generators_of_ideals() {
        let r = Ambient::free(2, &[0]);
        let single = |d: i32| -> Result<Vec<Vec<Poly>>> {
            Ok(if d >= 2 && d % 2 == 0 {
                monomials(2, (d / 2 - 1) as u32, None)
                    .monos
                    .iter()
                    .map(|m| vec![p2("x1").mul(&Poly::term(2, m.clone(), Scalar::one()))])
                    .collect()
            } else {
                vec![]
            })
        };
        let g = minimal_generators(&r, -2, 10, single).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].0, 2);
        // (α_s, α_t) is the maximal ideal: all of R_+
        let both =
            |d: i32| -> Result<Vec<Vec<Poly>>> { Ok(if d >= 2 { r.basis(d) } else { vec![] }) };
        let g = minimal_generators(&r, -2, 10, both).unwrap();
        assert_eq!(g.iter().map(|x| x.0).collect::<Vec<_>>(), vec![2, 2]);
        assert!(spans_freely(&r, &g[..1], 0, 8));
        assert!(!spans_freely(&r, &g, 0, 8));
        let late =
            |d: i32| -> Result<Vec<Vec<Poly>>> { Ok(if d >= 8 { r.basis(d) } else { vec![] }) };
        assert!(matches!(
            minimal_generators(&r, 0, 8, late),
            Err(Error::WindowNotStabilized { .. })
        ));
    }

    #[test]
    fn encode_decode() {
        let a = Ambient::from_module(2, &GradedFreeModule::quotient(vec![0, 2], p2("x1 + x2")))
            .unwrap();
        let e = vec![p2("x1^2"), p2("x2^3")];
        let r = a.reduce(&e);
        let v = a.encode(&r, 4);
        assert_eq!(a.decode(&v, 4), r);
        assert_eq!(a.dim(4), 2);
    }
}
