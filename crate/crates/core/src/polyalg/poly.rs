//! Sparse multivariate polynomials over `Scalar`; linear forms have internal degree 2.

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Exponent vector. Ordered by total degree, then lexicographically with x1 largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Monomial {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

type MonoCache = Mutex<HashMap<(usize, u32, Option<usize>), Arc<MonomialBasis>>>;

/// All monomials of a fixed polynomial degree, optionally avoiding one variable.
#[derive(Debug)]
pub struct MonomialBasis {
    pub monos: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
}

/// Monomials of polynomial degree `k` in `n` variables, descending order; `avoid` drops one variable.
pub fn monomials(n: usize, k: u32, avoid: Option<usize>) -> Arc<MonomialBasis> {
    static CACHE: OnceLock<MonoCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&(n, k, avoid)) {
        return b.clone();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u8; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u8>, avoid: Option<usize>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if i + 1 == n {
            if avoid == Some(i) && left > 0 {
                return;
            }
            cur[i] = left as u8;
            out.push(Monomial(cur.clone()));
            cur[i] = 0;
            return;
        }
        let top = if avoid == Some(i) { 0 } else { left };
        for e in (0..=top).rev() {
            cur[i] = e as u8;
            rec(i + 1, left - e, cur, avoid, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        if k == 0 {
            out.push(Monomial(vec![]));
        }
    } else {
        rec(0, k, &mut cur, avoid, &mut out);
    }
    let index = out
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let b = Arc::new(MonomialBasis { monos: out, index });
    cache.lock().unwrap().insert((n, k, avoid), b.clone());
    b
}

/// Number of monomials of polynomial degree k in n variables.
pub fn count_monomials(n: usize, k: i64) -> usize {
    if k < 0 {
        return 0;
    }
    if n == 0 {
        return usize::from(k == 0);
    }
    // binomial(k + n - 1, n - 1)
    let (top, r) = (k as u128 + n as u128 - 1, n as u128 - 1);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (top - i) / (i + 1);
    }
    acc as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    n: usize,
    terms: Vec<(Monomial, Scalar)>, // ascending monomial order, nonzero coefficients
}

impl Poly {
    pub fn zero(n: usize) -> Poly {
        Poly {
            n,
            terms: Vec::new(),
        }
    }

    pub fn one(n: usize) -> Poly {
        Poly::constant(n, Scalar::one())
    }

    pub fn constant(n: usize, c: Scalar) -> Poly {
        Poly::term(n, Monomial::one(n), c)
    }

    pub fn term(n: usize, m: Monomial, c: Scalar) -> Poly {
        debug_assert_eq!(m.0.len(), n);
        if c.is_zero() {
            Poly::zero(n)
        } else {
            Poly {
                n,
                terms: vec![(m, c)],
            }
        }
    }

    pub fn var(n: usize, i: usize) -> Poly {
        Poly::term(n, Monomial::var(n, i), Scalar::one())
    }

    /// Linear form Σ c_i x_i.
    pub fn linear(coeffs: &[Scalar]) -> Poly {
        let n = coeffs.len();
        Poly::from_map(
            n,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }

    pub fn from_map(n: usize, it: impl IntoIterator<Item = (Monomial, Scalar)>) -> Poly {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in it {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(v) => *v += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Poly {
            n,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        match self.terms.binary_search_by(|(k, _)| k.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.n))
    }

    /// Internal degree (twice the total degree) of a nonzero homogeneous polynomial.
    pub fn degree(&self) -> Option<i32> {
        let first = self.terms.first()?.0.total();
        if self.terms.iter().all(|(m, _)| m.total() == first) {
            Some(2 * first as i32)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Homogeneous component of polynomial degree k.
    pub fn component(&self, k: u32) -> Poly {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total() == k)
                .cloned()
                .collect(),
        }
    }

    pub fn field(&self) -> Result<Field> {
        let mut f = Field::Rational;
        for (_, c) in &self.terms {
            if c.discriminant() != 0 {
                f = f.join(Field::Quadratic {
                    d: c.discriminant(),
                })?;
            }
        }
        Ok(f)
    }

    fn merge(&self, o: &Poly, sign: bool) -> Poly {
        assert_eq!(self.n, o.n, "polynomials over different variable counts");
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let (m, c) = &o.terms[j];
                    out.push((m.clone(), if sign { c.clone() } else { -c }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if sign {
                        &self.terms[i].1 + &o.terms[j].1
                    } else {
                        &self.terms[i].1 - &o.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly {
            n: self.n,
            terms: out,
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        self.merge(o, true)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        if o.is_zero() {
            return self.clone();
        }
        self.merge(o, false)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.n);
        }
        if s.is_one() {
            return self.clone();
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.n, o.n, "polynomials over different variable counts");
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.n);
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.mul_monomial(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.mul_monomial(m, c);
        }
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let m = a.mul(b);
                let c = x * y;
                match acc.get_mut(&m) {
                    Some(v) => *v += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly {
            n: self.n,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.n);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Ring map sending x_i to `images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.n);
        let m = images.first().map(|p| p.n).unwrap_or(0);
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::one(p.n), p.clone()])
            .collect();
        let mut out = Poly::zero(m);
        for (mono, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &point[i];
                }
            }
            out += &t;
        }
        out
    }

    /// Coefficients of a linear form; None unless homogeneous of internal degree 2.
    pub fn linear_coeffs(&self) -> Option<Vec<Scalar>> {
        if self.degree() != Some(2) {
            return None;
        }
        Some(
            (0..self.n)
                .map(|i| self.coeff(&Monomial::var(self.n, i)))
                .collect(),
        )
    }

    /// The variable eliminated by `reduce_mod_linear(_, self)`.
    pub fn leading_variable(&self) -> Option<usize> {
        let c = self.linear_coeffs()?;
        c.iter().position(|x| !x.is_zero())
    }

    /// Canonical representative modulo a linear form: eliminates its first variable with nonzero
    /// coefficient.
    pub fn reduce_mod_linear(&self, alpha: &Poly) -> Result<Poly> {
        let c = alpha.linear_coeffs().ok_or(Error::ZeroLabel)?;
        let v = c
            .iter()
            .position(|x| !x.is_zero())
            .ok_or(Error::ZeroLabel)?;
        Ok(self.reduce_mod_var(v, &c))
    }

    pub(crate) fn reduce_mod_var(&self, v: usize, c: &[Scalar]) -> Poly {
        if self.terms.iter().all(|(m, _)| m.0[v] == 0) {
            return self.clone();
        }
        let inv = c[v].inv().expect("pivot coefficient nonzero");
        // x_v = -(1/c_v) Σ_{i≠v} c_i x_i
        let sub = Poly::from_map(
            self.n,
            c.iter()
                .enumerate()
                .filter(|&(i, _)| i != v)
                .map(|(i, ci)| (Monomial::var(self.n, i), -(ci * &inv))),
        );
        let mut powers = vec![Poly::one(self.n), sub.clone()];
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, k) in &self.terms {
            let e = m.0[v] as usize;
            let mut rest = m.clone();
            rest.0[v] = 0;
            if e == 0 {
                let slot = acc.entry(rest).or_insert_with(Scalar::zero);
                *slot += k;
                continue;
            }
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(&sub);
                powers.push(next);
            }
            for (pm, pc) in powers[e].terms() {
                let slot = acc.entry(rest.mul(pm)).or_insert_with(Scalar::zero);
                *slot += &(k * pc);
            }
        }
        Poly {
            n: self.n,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Exact division; None if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        let lead = d.terms.last().unwrap().clone();
        let inv = lead.1.inv()?;
        let mut rem = self.clone();
        let mut q: Vec<(Monomial, Scalar)> = Vec::new();
        while let Some((m, c)) = rem.terms.last().cloned() {
            if !lead.0.divides(&m) {
                return None;
            }
            let qm = m.div(&lead.0);
            let qc = &c * &inv;
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            q.push((qm, qc));
        }
        Some(Poly::from_map(self.n, q))
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono = mono_string(m, names);
            let (neg, body) = if c.is_compound() {
                (false, c.to_string())
            } else if c.rational_part().is_negative() {
                (true, (-c).to_string())
            } else {
                (false, c.to_string())
            };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            match (body.as_str(), mono.is_empty()) {
                (b, true) => s.push_str(b),
                ("1", false) => s.push_str(&mono),
                (b, false) => {
                    s.push_str(b);
                    s.push('*');
                    s.push_str(&mono);
                }
            }
        }
        s
    }

    pub fn parse(s: &str, names: &[String], field: Field) -> Result<Poly> {
        Parser {
            src: s.as_bytes(),
            pos: 0,
            names,
            field,
        }
        .poly()
    }

    /// Parses with default names x1..xn.
    pub fn parse_default(s: &str, n: usize, field: Field) -> Result<Poly> {
        Poly::parse(s, &default_names(n), field)
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn mono_string(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            e => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.n)))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
    field: Field,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} of polynomial", self.pos))
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<Poly> {
        let n = self.names.len();
        let mut out = Poly::zero(n);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                None if !first => break,
                _ if first => false,
                _ => return Err(self.err("expected + or -")),
            };
            let t = self.term()?;
            out = if sign { out.sub(&t) } else { out.add(&t) };
            first = false;
            if self.peek().is_none() {
                break;
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Poly> {
        let n = self.names.len();
        let mut coeff = Scalar::one();
        let mut mono = Monomial::one(n);
        loop {
            match self.peek() {
                Some(b'(') => {
                    let start = self.pos;
                    let end = self.src[start..]
                        .iter()
                        .position(|&c| c == b')')
                        .ok_or_else(|| self.err("unclosed parenthesis"))?;
                    let txt = std::str::from_utf8(&self.src[start..=start + end])
                        .map_err(|_| self.err("utf8"))?;
                    let s = Scalar::parse_in(txt, self.field)?;
                    coeff = &coeff * &s;
                    self.pos = start + end + 1;
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/')
                    {
                        self.pos += 1;
                    }
                    let txt = std::str::from_utf8(&self.src[start..self.pos])
                        .map_err(|_| self.err("utf8"))?;
                    let q = super::rational::Q::parse(txt).ok_or_else(|| self.err("bad number"))?;
                    coeff = &coeff * &Scalar::from_q(q);
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric()
                            || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos])
                        .map_err(|_| self.err("utf8"))?;
                    let i = self
                        .names
                        .iter()
                        .position(|v| v == name)
                        .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                    let mut e: u32 = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.ws();
                        let st = self.pos;
                        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                            self.pos += 1;
                        }
                        e = std::str::from_utf8(&self.src[st..self.pos])
                            .ok()
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| self.err("bad exponent"))?;
                    }
                    let total = mono.0[i] as u32 + e;
                    if total > 200 {
                        return Err(self.err("exponent too large"));
                    }
                    mono.0[i] = total as u8;
                }
                _ => return Err(self.err("expected factor")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Poly::term(n, mono, coeff))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        Poly::parse_default(s, 3, Field::Rational).unwrap()
    }

    #[test]
    fn text_format() {
        let x = p("3*x1^2*x2 - 1/2*x3");
        assert_eq!(x.to_string(), "3*x1^2*x2 - 1/2*x3");
        assert_eq!(p("0"), Poly::zero(3));
        assert_eq!(p("-x1 + x1"), Poly::zero(3));
        assert_eq!(p("x1*x1"), p("x1^2"));
        assert!(Poly::parse_default("x4", 3, Field::Rational).is_err());
        assert!(Poly::parse_default("x1 +", 3, Field::Rational).is_err());
        let q = Poly::parse_default("(1+2r)*x1 - x2", 2, Field::Quadratic { d: 2 }).unwrap();
        assert_eq!(
            Poly::parse_default(&q.to_string(), 2, Field::Quadratic { d: 2 }).unwrap(),
            q
        );
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 2, None).len(), 3);
        assert_eq!(monomials(3, 2, Some(0)).len(), 3);
        assert_eq!(count_monomials(3, 2), 6);
        assert_eq!(count_monomials(2, -1), 0);
    }

    #[test]
    fn reduce_examples() {
        // variables are simple roots: α_s = x1, α_t = x2
        let a = p("x1");
        let b = p("x2");
        assert!(a.reduce_mod_linear(&a).unwrap().is_zero());
        assert_eq!(b.reduce_mod_linear(&a).unwrap(), b);
        assert!(a.mul(&a).reduce_mod_linear(&a).unwrap().is_zero());
        assert_eq!(
            Poly::zero(3).reduce_mod_linear(&Poly::zero(3)),
            Err(Error::ZeroLabel)
        );
    }

    #[test]
    fn exact_division() {
        let a = p("x1 + x2");
        let b = p("x1^2 - x3*x2 + 3*x2");
        assert_eq!(a.mul(&b).div_exact(&a), Some(b.clone()));
        assert_eq!(b.div_exact(&a), None);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(((0u8..3, 0u8..3, 0u8..3), -5i64..5, 1i64..4), 0..6).prop_map(
            |ts| {
                Poly::from_map(
                    3,
                    ts.into_iter()
                        .map(|((a, b, c), n, d)| (Monomial(vec![a, b, c]), Scalar::frac(n, d))),
                )
            },
        )
    }

    fn arb_linear() -> impl Strategy<Value = Poly> {
        (-3i64..3, -3i64..3, 1i64..3).prop_map(|(a, b, c)| {
            Poly::linear(&[
                Scalar::from_i64(a),
                Scalar::from_i64(b),
                Scalar::from_i64(c),
            ])
        })
    }

    proptest! {
        #[test]
        fn reduce_is_linear_and_kills_multiples(x in arb_poly(), y in arb_poly(), a in arb_linear()) {
            let r = |q: &Poly| q.reduce_mod_linear(&a).unwrap();
            prop_assert!(r(&x.mul(&a)).is_zero());
            prop_assert_eq!(r(&x.add(&y)), r(&x).add(&r(&y)));
            prop_assert_eq!(r(&r(&x)), r(&x));
            // x - r(x) is a multiple of a
            prop_assert!(x.sub(&r(&x)).div_exact(&a).is_some());
        }

        #[test]
        fn ring_laws(x in arb_poly(), y in arb_poly(), z in arb_poly()) {
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn print_parse_roundtrip(x in arb_poly()) {
            let s = x.to_string();
            prop_assert_eq!(Poly::parse_default(&s, 3, Field::Rational).unwrap(), x);
        }
    }
}
