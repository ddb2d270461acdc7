//! Exact sparse linear algebra over `Scalar`.

use super::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse vector: strictly increasing indices, nonzero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(pub Vec<(usize, Scalar)>);

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec(Vec::new())
    }

    pub fn unit(i: usize) -> SparseVec {
        SparseVec(vec![(i, Scalar::one())])
    }

    pub fn from_map(m: BTreeMap<usize, Scalar>) -> SparseVec {
        SparseVec(m.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn from_dense(v: &[Scalar]) -> SparseVec {
        SparseVec(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.0.binary_search_by_key(&i, |(k, _)| *k) {
            Ok(p) => self.0[p].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn lead(&self) -> Option<usize> {
        self.0.first().map(|(i, _)| *i)
    }

    pub fn scale(&self, s: &Scalar) -> SparseVec {
        if s.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, c)| (*i, c * s)).collect())
    }

    /// self + s·o
    pub fn axpy(&self, s: &Scalar, o: &SparseVec) -> SparseVec {
        if s.is_zero() || o.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < o.0.len() {
            let a = self.0.get(i).map(|x| x.0);
            let b = o.0.get(j).map(|x| x.0);
            match (a, b) {
                (Some(x), Some(y)) if x == y => {
                    let c = &self.0[i].1 + &(s * &o.0[j].1);
                    if !c.is_zero() {
                        out.push((x, c));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                (Some(_), None) => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                _ => {
                    out.push((o.0[j].0, s * &o.0[j].1));
                    j += 1;
                }
            }
        }
        SparseVec(out)
    }

    pub fn add(&self, o: &SparseVec) -> SparseVec {
        self.axpy(&Scalar::one(), o)
    }

    pub fn sub(&self, o: &SparseVec) -> SparseVec {
        self.axpy(&-Scalar::one(), o)
    }

    pub fn to_dense(&self, n: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); n];
        for (i, c) in &self.0 {
            v[*i] = c.clone();
        }
        v
    }
}

/// Incremental reduced row echelon form. Each stored row can carry a combination vector
/// expressing it in terms of the inserted inputs, which yields kernels and solutions.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>, // pivot -> (row with pivot 1, combination)
    inserted: usize,
    track: bool,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    /// Tracks combinations of inserted vectors (needed for `kernel` and `solve`).
    pub fn tracking() -> Echelon {
        Echelon {
            track: true,
            ..Echelon::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values().map(|(r, _)| r)
    }

    /// Reduces v against the stored rows; returns (residual, combination of inputs subtracted).
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut r = v.clone();
        let mut comb = SparseVec::new();
        let hits: Vec<(usize, Scalar)> =
            v.0.iter()
                .filter(|(i, _)| self.rows.contains_key(i))
                .cloned()
                .collect();
        for (col, _) in hits {
            let c = r.get(col);
            if c.is_zero() {
                continue;
            }
            let (row, rc) = &self.rows[&col];
            r = r.axpy(&-&c, row);
            if self.track {
                comb = comb.axpy(&c, rc);
            }
        }
        (r, comb)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts v; returns Err(combination) if v is dependent, where v = Σ comb_j input_j.
    pub fn insert(&mut self, v: &SparseVec) -> Result<usize, SparseVec> {
        let idx = self.inserted;
        self.inserted += 1;
        let (r, comb) = self.reduce(v);
        if r.is_zero() {
            return Err(comb);
        }
        let p = r.lead().unwrap();
        let inv = r.0[0].1.inv().unwrap();
        let row = r.scale(&inv);
        let rc = if self.track {
            SparseVec::unit(idx).sub(&comb).scale(&inv)
        } else {
            SparseVec::new()
        };
        for (other, oc) in self.rows.values_mut() {
            let c = other.get(p);
            if !c.is_zero() {
                *other = other.axpy(&-&c, &row);
                if self.track {
                    *oc = oc.axpy(&-&c, &rc);
                }
            }
        }
        self.rows.insert(p, (row, rc));
        Ok(idx)
    }

    /// Expresses v as a combination of inserted inputs, if possible.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "solve requires a tracking echelon");
        let (r, comb) = self.reduce(v);
        r.is_zero().then_some(comb)
    }
}

/// Kernel of the linear map sending unknown j to `images[j]`: basis of combinations summing to 0.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::tracking();
    let mut out = Vec::new();
    for (j, v) in images.iter().enumerate() {
        if let Err(comb) = e.insert(v) {
            out.push(SparseVec::unit(j).sub(&comb));
        }
    }
    out
}

pub fn rank(vs: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        let _ = e.insert(v);
    }
    e.rank()
}

/// Solves Σ x_j images[j] = target.
pub fn solve(images: &[SparseVec], target: &SparseVec) -> Option<SparseVec> {
    let mut e = Echelon::tracking();
    for v in images {
        let _ = e.insert(v);
    }
    e.solve(target)
}

/// Indices of a maximal independent subset, chosen greedily in order.
pub fn independent_subset(vs: &[SparseVec]) -> Vec<usize> {
    let mut e = Echelon::new();
    vs.iter()
        .enumerate()
        .filter(|(_, v)| e.insert(v).is_ok())
        .map(|(i, _)| i)
        .collect()
}

/// Inverse of a dense square matrix, if invertible.
pub fn invert(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].inv().unwrap();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn dense_rank(m: &[Vec<Scalar>]) -> usize {
    rank(
        &m.iter()
            .map(|r| SparseVec::from_dense(r))
            .collect::<Vec<_>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(v: &[i64]) -> SparseVec {
        SparseVec::from_dense(&v.iter().map(|&x| Scalar::from_i64(x)).collect::<Vec<_>>())
    }

    fn apply(images: &[SparseVec], x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in &x.0 {
            out = out.axpy(c, &images[*j]);
        }
        out
    }

    #[test]
    fn small_kernel() {
        let imgs = vec![sv(&[1, 0]), sv(&[0, 1]), sv(&[1, 1])];
        let k = kernel(&imgs);
        assert_eq!(k.len(), 1);
        assert!(apply(&imgs, &k[0]).is_zero());
        assert_eq!(rank(&imgs), 2);
    }

    #[test]
    fn inverse() {
        let m: Vec<Vec<Scalar>> = vec![vec![2.into_s(), 1.into_s()], vec![1.into_s(), 1.into_s()]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0][0], Scalar::from_i64(1));
        assert_eq!(inv[0][1], Scalar::from_i64(-1));
        assert!(invert(&[vec![1.into_s(), 1.into_s()], vec![1.into_s(), 1.into_s()]]).is_none());
    }

    trait IntoS {
        fn into_s(self) -> Scalar;
    }
    impl IntoS for i64 {
        fn into_s(self) -> Scalar {
            Scalar::from_i64(self)
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 1..7)) {
            let imgs: Vec<SparseVec> = rows.iter().map(|r| sv(r)).collect();
            let k = kernel(&imgs);
            prop_assert_eq!(k.len() + rank(&imgs), imgs.len());
            for v in &k {
                prop_assert!(apply(&imgs, v).is_zero());
            }
            let target = apply(&imgs, &sv(&[1, 2, 0, 1, 3, 0, 1][..imgs.len()]));
            let x = solve(&imgs, &target).unwrap();
            prop_assert_eq!(apply(&imgs, &x), target);
        }
    }
}
