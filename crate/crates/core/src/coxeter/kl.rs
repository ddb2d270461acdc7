use super::group::CoxeterGroup;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::Mutex;

/// Integer polynomial in q, coefficients from q^0 upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct KlPolynomial(pub Vec<i64>);

impl KlPolynomial {
    pub fn one() -> KlPolynomial {
        KlPolynomial(vec![1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    fn trim(mut v: Vec<i64>) -> KlPolynomial {
        while v.last() == Some(&0) {
            v.pop();
        }
        KlPolynomial(v)
    }

    fn add_shifted(acc: &mut Vec<i64>, p: &KlPolynomial, shift: usize, c: i64) {
        if acc.len() < p.0.len() + shift {
            acc.resize(p.0.len() + shift, 0);
        }
        for (i, x) in p.0.iter().enumerate() {
            acc[i + shift] += c * x;
        }
    }
}

impl std::fmt::Display for KlPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match k {
                0 => c.to_string(),
                1 if c == 1 => "q".to_string(),
                1 => format!("{c}q"),
                _ if c == 1 => format!("q^{k}"),
                _ => format!("{c}q^{k}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Memoized Kazhdan–Lusztig polynomials of a finite group, via the standard recursion on a
/// left descent.
pub struct KlTable<'a> {
    g: &'a CoxeterGroup,
    memo: Mutex<HashMap<(usize, usize), KlPolynomial>>,
}

impl<'a> KlTable<'a> {
    pub fn new(g: &'a CoxeterGroup) -> KlTable<'a> {
        KlTable {
            g,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn kl_polynomial(&self, x: usize, w: usize) -> Result<KlPolynomial> {
        if !self.g.bruhat_leq(x, w) {
            return Err(Error::NotComparable);
        }
        Ok(self.p(x, w))
    }

    /// μ(z, w): coefficient of q^{(ℓ(w)−ℓ(z)−1)/2} in P_{z,w}.
    pub fn mu(&self, z: usize, w: usize) -> i64 {
        let (lz, lw) = (self.g.length(z), self.g.length(w));
        if lz >= lw || (lw - lz) % 2 == 0 || !self.g.bruhat_leq(z, w) {
            return 0;
        }
        self.p(z, w).coeff((lw - lz - 1) / 2)
    }

    fn p(&self, x: usize, w: usize) -> KlPolynomial {
        if !self.g.bruhat_leq(x, w) {
            return KlPolynomial::default();
        }
        if x == w {
            return KlPolynomial::one();
        }
        if let Some(v) = self.memo.lock().unwrap().get(&(x, w)) {
            return v.clone();
        }
        let g = self.g;
        let s = g.left_descents(w)[0];
        let v = g.mul_left(s, w);
        let sx = g.mul_left(s, x);
        let c = usize::from(g.length(sx) < g.length(x));
        let mut acc = Vec::new();
        KlPolynomial::add_shifted(&mut acc, &self.p(sx, v), 1 - c, 1);
        KlPolynomial::add_shifted(&mut acc, &self.p(x, v), c, 1);
        for z in 0..g.len() {
            if z == v || !g.bruhat_leq(z, v) || !g.bruhat_leq(x, z) {
                continue;
            }
            if g.length(g.mul_left(s, z)) >= g.length(z) {
                continue;
            }
            let m = self.mu(z, v);
            if m != 0 {
                let shift = (g.length(w) - g.length(z)) / 2;
                KlPolynomial::add_shifted(&mut acc, &self.p(x, z), shift, -m);
            }
        }
        let out = KlPolynomial::trim(acc);
        self.memo.lock().unwrap().insert((x, w), out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_all_one() {
        let g = CoxeterGroup::parse_type("A2").unwrap();
        let kl = KlTable::new(&g);
        for x in 0..6 {
            for w in 0..6 {
                if g.bruhat_leq(x, w) {
                    assert_eq!(kl.kl_polynomial(x, w).unwrap(), KlPolynomial::one());
                } else {
                    assert_eq!(kl.kl_polynomial(x, w), Err(Error::NotComparable));
                }
            }
        }
    }

    #[test]
    fn s4_singular_pair() {
        let g = CoxeterGroup::parse_type("A3").unwrap();
        let kl = KlTable::new(&g);
        let x = g.parse_element("s2").unwrap();
        let w = g.parse_element("s2s1s3s2").unwrap();
        assert_eq!(kl.kl_polynomial(x, w).unwrap(), KlPolynomial(vec![1, 1]));
        assert_eq!(kl.kl_polynomial(0, w).unwrap(), KlPolynomial(vec![1, 1]));
    }
}
