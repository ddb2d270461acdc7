use super::realization::{mat_identity, mat_mul, mat_vec, Mat, Realization};
use super::system::CoxeterSystem;
use crate::error::{Error, Result};
use crate::polyalg::{linalg::dense_rank, Poly, Scalar};
use std::collections::HashMap;

/// A group element: its matrix on V*, one reduced word, and its length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterElement {
    pub matrix: Mat,
    pub word: Vec<usize>,
    pub length: usize,
}

/// A finite Coxeter group enumerated through a realization. Elements are indexed in
/// breadth-first order; index 0 is the identity.
#[derive(Clone, Debug)]
pub struct CoxeterGroup {
    pub system: CoxeterSystem,
    pub realization: Realization,
    pub elements: Vec<CoxeterElement>,
    index: HashMap<Mat, usize>,
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    leq: Vec<Vec<bool>>,
    reflections: Vec<usize>,
    reflection_roots: HashMap<usize, Vec<Scalar>>,
}

impl CoxeterGroup {
    pub fn new(system: CoxeterSystem, realization: Realization) -> Result<CoxeterGroup> {
        system.validate()?;
        realization.validate()?;
        if realization.actions.len() != system.rank() {
            return Err(Error::Validation(
                "realization rank differs from the Coxeter system".into(),
            ));
        }
        let n = system.rank();
        let dim = realization.dim;
        let mut elements = vec![CoxeterElement {
            matrix: mat_identity(dim),
            word: vec![],
            length: 0,
        }];
        let mut index = HashMap::new();
        index.insert(mat_identity(dim), 0);
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            let mut row = Vec::with_capacity(n);
            for s in 0..n {
                let m = mat_mul(&elements[head].matrix, &realization.actions[s]);
                let j = match index.get(&m) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= system.order_bound {
                            return Err(Error::OrderBoundExceeded(system.order_bound));
                        }
                        let mut word = elements[head].word.clone();
                        word.push(s);
                        let length = elements[head].length + 1;
                        index.insert(m.clone(), elements.len());
                        elements.push(CoxeterElement {
                            matrix: m,
                            word,
                            length,
                        });
                        elements.len() - 1
                    }
                };
                row.push(j);
            }
            right.push(row);
            head += 1;
        }
        let left: Vec<Vec<usize>> = elements
            .iter()
            .map(|e| {
                (0..n)
                    .map(|s| index[&mat_mul(&realization.actions[s], &e.matrix)])
                    .collect()
            })
            .collect();
        let mut g = CoxeterGroup {
            system,
            realization,
            elements,
            index,
            right,
            left,
            inverse: vec![],
            leq: vec![],
            reflections: vec![],
            reflection_roots: HashMap::new(),
        };
        g.inverse = (0..g.len())
            .map(|w| g.from_word(&g.elements[w].word.iter().rev().copied().collect::<Vec<_>>()))
            .collect();
        g.leq = g.compute_bruhat();
        g.compute_reflections();
        Ok(g)
    }

    pub fn geometric(system: CoxeterSystem) -> Result<CoxeterGroup> {
        let r = Realization::geometric(&system)?;
        CoxeterGroup::new(system, r)
    }

    pub fn parse_type(spec: &str) -> Result<CoxeterGroup> {
        CoxeterGroup::geometric(CoxeterSystem::parse(spec)?)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn length(&self, w: usize) -> usize {
        self.elements[w].length
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.elements[w].word
    }

    pub fn name(&self, w: usize) -> String {
        self.system.word_string(&self.elements[w].word)
    }

    pub fn longest(&self) -> usize {
        self.len() - 1
    }

    pub fn mul_right(&self, w: usize, s: usize) -> usize {
        self.right[w][s]
    }

    pub fn mul_left(&self, s: usize, w: usize) -> usize {
        self.left[w][s]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.elements[y]
            .word
            .iter()
            .fold(x, |acc, &s| self.right[acc][s])
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    pub fn from_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &s| self.right[acc][s])
    }

    pub fn find(&self, m: &Mat) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Element named by a word string; the word need not be reduced.
    pub fn parse_element(&self, w: &str) -> Result<usize> {
        Ok(self.from_word(&self.system.parse_word(w)?))
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        self.length(self.from_word(word)) == word.len()
    }

    pub fn bruhat_leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    fn compute_bruhat(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut leq = vec![vec![false; n]; n];
        // elements are in length order, so sw is processed before w
        for w in 0..n {
            if w == 0 {
                leq[0][0] = true;
                continue;
            }
            let s = self.elements[w].word[0];
            let sw = self.mul_left(s, w);
            for x in 0..n {
                let sx = self.mul_left(s, x);
                let m = if self.length(sx) < self.length(x) {
                    sx
                } else {
                    x
                };
                leq[x][w] = leq[m][sw];
            }
        }
        leq
    }

    fn compute_reflections(&mut self) {
        let n = self.rank();
        let mut refl = Vec::new();
        let mut roots = HashMap::new();
        for w in 0..self.len() {
            for s in 0..n {
                let t = self.mul(self.mul(w, self.from_word(&[s])), self.inverse(w));
                if let std::collections::hash_map::Entry::Vacant(e) = roots.entry(t) {
                    let mut r = mat_vec(&self.elements[w].matrix, &self.realization.roots[s]);
                    if let Some(first) = r.iter().find(|x| !x.is_zero()) {
                        if first.rational_part().is_negative()
                            || (first.rational_part().is_zero()
                                && first.radical_part().is_negative())
                        {
                            r = r.iter().map(|x| -x).collect();
                        }
                    }
                    e.insert(r);
                    refl.push(t);
                }
            }
        }
        refl.sort_unstable();
        self.reflections = refl;
        self.reflection_roots = roots;
    }

    pub fn reflections(&self) -> &[usize] {
        &self.reflections
    }

    pub fn is_reflection(&self, w: usize) -> bool {
        self.reflection_roots.contains_key(&w)
    }

    /// Root covector α_t of a reflection, normalized so its first nonzero coefficient is positive.
    pub fn reflection_root(&self, t: usize) -> Option<&[Scalar]> {
        self.reflection_roots.get(&t).map(|v| v.as_slice())
    }

    pub fn root_poly(&self, t: usize) -> Poly {
        Poly::linear(self.reflection_root(t).expect("not a reflection"))
    }

    /// Action of w on a polynomial: x_i ↦ w(x_i).
    pub fn act(&self, w: usize, p: &Poly) -> Poly {
        if w == 0 {
            return p.clone();
        }
        p.substitute(&Realization::variable_images(&self.elements[w].matrix))
    }

    /// Action of w on a linear form given by coefficients.
    pub fn act_linear(&self, w: usize, c: &[Scalar]) -> Vec<Scalar> {
        mat_vec(&self.elements[w].matrix, c)
    }

    /// Right descents: s with ws < w.
    pub fn right_descents(&self, w: usize) -> Vec<usize> {
        (0..self.rank())
            .filter(|&s| self.length(self.mul_right(w, s)) < self.length(w))
            .collect()
    }

    pub fn left_descents(&self, w: usize) -> Vec<usize> {
        (0..self.rank())
            .filter(|&s| self.length(self.mul_left(s, w)) < self.length(w))
            .collect()
    }

    /// Faithfulness (same order as the geometric representation) and the codimension-one
    /// criterion for reflections. Returns the first offending element on failure.
    pub fn check_reflection_faithful(&self) -> Result<std::result::Result<(), usize>> {
        let reference = CoxeterGroup::geometric(self.system.clone())?;
        if reference.len() != self.len() {
            return Ok(Err(0));
        }
        let dim = self.realization.dim;
        let id = mat_identity(dim);
        for w in 0..self.len() {
            let diff: Mat = self.elements[w]
                .matrix
                .iter()
                .zip(&id)
                .map(|(r, i)| r.iter().zip(i).map(|(a, b)| a - b).collect())
                .collect();
            let corank_is_one = dense_rank(&diff) == 1;
            if corank_is_one != self.is_reflection(w) {
                return Ok(Err(w));
            }
        }
        Ok(Ok(()))
    }

    /// Cosets W/W_s: (minimal representative, other element, d = ℓ(min rep)), in order of the
    /// minimal representatives.
    pub fn cosets(&self, s: usize) -> Vec<Coset> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            let xs = self.mul_right(x, s);
            if self.length(x) < self.length(xs) {
                out.push(Coset {
                    min: x,
                    max: xs,
                    d: self.length(x),
                });
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coset {
    pub min: usize,
    pub max: usize,
    pub d: usize,
}

/// Cosets with the induced order, as in `coset_data`.
pub fn coset_data(g: &CoxeterGroup, s: usize) -> (Vec<Coset>, Vec<Vec<bool>>) {
    let cs = g.cosets(s);
    let order = cs
        .iter()
        .map(|p| cs.iter().map(|q| g.bruhat_leq(p.min, q.min)).collect())
        .collect();
    (cs, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Field;

    #[test]
    fn sizes() {
        for (t, n, l) in [
            ("A1", 2, 1),
            ("A2", 6, 3),
            ("B2", 8, 4),
            ("A3", 24, 6),
            ("G2", 12, 6),
        ] {
            let g = CoxeterGroup::parse_type(t).unwrap();
            assert_eq!(g.len(), n, "{t}");
            assert_eq!(g.length(g.longest()), l, "{t}");
        }
    }

    #[test]
    fn bruhat_examples() {
        let g = CoxeterGroup::parse_type("A2").unwrap();
        let e = |w: &str| g.parse_element(w).unwrap();
        assert!(g.bruhat_leq(e("s"), e("sts")));
        assert!(!g.bruhat_leq(e("st"), e("ts")));
        assert!((0..6).all(|w| g.bruhat_leq(0, w)));
    }

    #[test]
    fn reflections_counts() {
        assert_eq!(
            CoxeterGroup::parse_type("A1").unwrap().reflections().len(),
            1
        );
        assert_eq!(
            CoxeterGroup::parse_type("A2").unwrap().reflections().len(),
            3
        );
        assert_eq!(
            CoxeterGroup::parse_type("B2").unwrap().reflections().len(),
            4
        );
        assert_eq!(
            CoxeterGroup::parse_type("A3").unwrap().reflections().len(),
            6
        );
    }

    #[test]
    fn faithfulness() {
        for t in ["A1", "A2", "B2", "A3"] {
            assert_eq!(
                CoxeterGroup::parse_type(t)
                    .unwrap()
                    .check_reflection_faithful()
                    .unwrap(),
                Ok(()),
                "{t}"
            );
        }
        let sys = CoxeterSystem::parse("A1").unwrap();
        let minus = vec![
            vec![-Scalar::one(), Scalar::zero()],
            vec![Scalar::zero(), -Scalar::one()],
        ];
        let r = Realization::explicit(
            Field::Rational,
            vec![minus],
            vec![vec![Scalar::one(), Scalar::zero()]],
        )
        .unwrap();
        let g = CoxeterGroup::new(sys.clone(), r).unwrap();
        assert_eq!(g.check_reflection_faithful().unwrap(), Err(1));
        let line = Realization::explicit(
            Field::Rational,
            vec![vec![vec![-Scalar::one()]]],
            vec![vec![Scalar::from_i64(2)]],
        )
        .unwrap();
        assert_eq!(
            CoxeterGroup::new(sys, line)
                .unwrap()
                .check_reflection_faithful()
                .unwrap(),
            Ok(())
        );
    }

    #[test]
    fn cosets() {
        for (t, n, ds) in [
            ("A1", 1, vec![0]),
            ("A2", 3, vec![0, 1, 2]),
            ("B2", 4, vec![0, 1, 2, 3]),
        ] {
            let g = CoxeterGroup::parse_type(t).unwrap();
            let (cs, _) = coset_data(&g, 0);
            assert_eq!(cs.len(), n);
            assert_eq!(cs.iter().map(|c| c.d).collect::<Vec<_>>(), ds);
        }
    }

    #[test]
    fn roots_are_negated_by_their_reflection() {
        let g = CoxeterGroup::parse_type("B2").unwrap();
        for &t in g.reflections() {
            let a = g.root_poly(t);
            assert_eq!(g.act(t, &a), a.neg());
        }
    }
}
