//! Elements of ℚ or ℚ(√d).

use super::rational::{square_free_part, Q};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Coefficient field descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Field {
    Rational,
    Quadratic { d: i64 },
}

impl Field {
    pub fn quadratic(d: i64) -> Result<Field> {
        let (m, _) = square_free_part(d);
        if m == 1 || d == 0 {
            return Err(Error::Validation(format!("discriminant {d} is a square")));
        }
        if m != d {
            return Err(Error::Validation(format!(
                "discriminant {d} is not square free"
            )));
        }
        Ok(Field::Quadratic { d })
    }

    pub fn discriminant(&self) -> i64 {
        match self {
            Field::Rational => 0,
            Field::Quadratic { d } => *d,
        }
    }

    /// The smallest field containing both, if any.
    pub fn join(self, other: Field) -> Result<Field> {
        match (self, other) {
            (Field::Rational, f) | (f, Field::Rational) => Ok(f),
            (Field::Quadratic { d: a }, Field::Quadratic { d: b }) if a == b => Ok(self),
            _ => Err(Error::FieldMismatch(format!("{self:?} vs {other:?}"))),
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        x.d == 0 || x.d == self.discriminant()
    }

    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.starts_with('{') {
            let f: Field = serde_json::from_str(t)?;
            if let Field::Quadratic { d } = f {
                return Field::quadratic(d);
            }
            return Ok(f);
        }
        match t {
            "rational" | "Q" | "q" => Ok(Field::Rational),
            _ => {
                let d = t
                    .strip_prefix("Q(sqrt")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| t.strip_prefix("quadratic:"))
                    .ok_or_else(|| Error::Parse(format!("unknown field spec {t:?}")))?;
                let d: i64 = d
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad discriminant in {t:?}")))?;
                Field::quadratic(d)
            }
        }
    }
}

/// a + b·√d, with d = 0 whenever b = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: Q,
    b: Q,
    d: i64,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar {
            a: Q::zero(),
            b: Q::zero(),
            d: 0,
        }
    }

    pub fn one() -> Scalar {
        Scalar::from_q(Q::one())
    }

    pub fn from_i64(n: i64) -> Scalar {
        Scalar::from_q(Q::from_i64(n))
    }

    pub fn frac(n: i64, m: i64) -> Scalar {
        Scalar::from_q(Q::new(n, m))
    }

    pub fn from_q(a: Q) -> Scalar {
        Scalar {
            a,
            b: Q::zero(),
            d: 0,
        }
    }

    /// a + b√d; d must be square free and not 1.
    pub fn quadratic(a: Q, b: Q, d: i64) -> Scalar {
        if b.is_zero() {
            return Scalar::from_q(a);
        }
        debug_assert!(square_free_part(d).0 == d && d != 1 && d != 0);
        Scalar { a, b, d }
    }

    pub fn sqrt(d: i64) -> Scalar {
        Scalar::quadratic(Q::zero(), Q::one(), d)
    }

    pub fn rational_part(&self) -> &Q {
        &self.a
    }

    pub fn radical_part(&self) -> &Q {
        &self.b
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn joint_d(&self, o: &Scalar) -> i64 {
        match (self.d, o.d) {
            (0, d) | (d, 0) => d,
            (x, y) => {
                assert_eq!(x, y, "mixing scalars from different quadratic fields");
                x
            }
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.b.is_zero() {
            return Some(Scalar::from_q(self.a.inv()?));
        }
        // (a - b r) / (a² - d b²)
        let dq = Q::from_i64(self.d);
        let norm = &(&self.a * &self.a) - &(&dq * &(&self.b * &self.b));
        let ninv = norm.inv()?;
        Some(Scalar::quadratic(
            &self.a * &ninv,
            -(&self.b * &ninv),
            self.d,
        ))
    }

    pub fn parse(s: &str) -> Result<Scalar> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            return parse_quadratic(inner, None);
        }
        Q::parse(t)
            .map(Scalar::from_q)
            .ok_or_else(|| Error::Parse(format!("bad scalar {t:?}")))
    }

    /// Parses with a fixed discriminant for the radical `r`.
    pub fn parse_in(s: &str, field: Field) -> Result<Scalar> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            return parse_quadratic(inner, Some(field));
        }
        Q::parse(t)
            .map(Scalar::from_q)
            .ok_or_else(|| Error::Parse(format!("bad scalar {t:?}")))
    }

    /// Whether the printed form needs parentheses when used as a coefficient.
    pub fn is_compound(&self) -> bool {
        !self.b.is_zero()
    }
}

/// Parses `a+br`, `a-br`, `br`, `r`, with `a`, `b` rationals. Without a field the discriminant
/// must be given as a suffix `;d=n` (used in free-standing scalars).
fn parse_quadratic(inner: &str, field: Option<Field>) -> Result<Scalar> {
    let bad = || Error::Parse(format!("bad quadratic scalar ({inner})"));
    let (body, d) = match inner.split_once(";d=") {
        Some((b, d)) => (b, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => match field {
            Some(Field::Quadratic { d }) => (inner, d),
            _ => return Err(bad()),
        },
    };
    if let Some(Field::Quadratic { d: fd }) = field {
        if fd != d {
            return Err(Error::FieldMismatch(format!(
                "scalar over √{d} in field √{fd}"
            )));
        }
    }
    if square_free_part(d).0 != d || d == 1 || d == 0 {
        return Err(bad());
    }
    let body: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    if !body.ends_with('r') {
        let a = Q::parse(&body).ok_or_else(bad)?;
        return Ok(Scalar::from_q(a));
    }
    let head = &body[..body.len() - 1];
    // split at the last top-level sign that is not the leading one
    let split = head
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
        .map(|(i, _)| i)
        .last();
    let (a_str, b_str) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("", head),
    };
    let a = if a_str.is_empty() {
        Q::zero()
    } else {
        Q::parse(a_str).ok_or_else(bad)?
    };
    let b_str = b_str.strip_suffix('*').unwrap_or(b_str);
    let b = match b_str {
        "" | "+" => Q::one(),
        "-" => -Q::one(),
        s => Q::parse(s.strip_prefix('+').unwrap_or(s)).ok_or_else(bad)?,
    };
    if b.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::quadratic(a, b, d))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b = if self.b.is_one() {
            String::new()
        } else if self.b == -Q::one() {
            "-".to_string()
        } else {
            self.b.to_string()
        };
        if self.a.is_zero() {
            write!(f, "({b}r)")
        } else if self.b.is_negative() {
            write!(f, "({}{b}r)", self.a)
        } else {
            write!(f, "({}+{b}r)", self.a)
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let d = self.joint_d(o);
        Scalar::quadratic(&self.a + &o.a, &self.b + &o.b, d)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let d = self.joint_d(o);
        Scalar::quadratic(&self.a - &o.a, &self.b - &o.b, d)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.b.is_zero() && o.b.is_zero() {
            return Scalar::from_q(&self.a * &o.a);
        }
        let d = self.joint_d(o);
        let dq = Q::from_i64(d);
        let a = &(&self.a * &o.a) + &(&dq * &(&self.b * &o.b));
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        Scalar::quadratic(a, b, d)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r2(a: i64, b: i64) -> Scalar {
        Scalar::quadratic(Q::from_i64(a), Q::from_i64(b), 2)
    }

    #[test]
    fn sqrt_two_squares() {
        let r = Scalar::sqrt(2);
        assert_eq!(&r * &r, Scalar::from_i64(2));
        assert!((&r * &r).is_rational());
    }

    #[test]
    fn display_and_parse() {
        let f = Field::Quadratic { d: 2 };
        for x in [
            r2(1, 2),
            r2(0, -1),
            r2(3, -5),
            Scalar::frac(-1, 2),
            r2(0, 1),
        ] {
            let s = x.to_string();
            assert_eq!(Scalar::parse_in(&s, f).unwrap(), x, "{s}");
        }
        assert_eq!(r2(1, 2).to_string(), "(1+2r)");
        assert_eq!(r2(0, -1).to_string(), "(-r)");
        assert_eq!(Scalar::parse("(1+2r;d=2)").unwrap(), r2(1, 2));
    }

    #[test]
    fn field_parse() {
        assert_eq!(
            Field::parse(r#"{"kind":"rational"}"#).unwrap(),
            Field::Rational
        );
        assert_eq!(
            Field::parse(r#"{"kind":"quadratic","d":2}"#).unwrap(),
            Field::Quadratic { d: 2 }
        );
        assert!(Field::parse(r#"{"kind":"quadratic","d":4}"#).is_err());
    }

    proptest! {
        #[test]
        fn field_axioms(a in -50i64..50, b in -50i64..50, c in -50i64..50, e in -50i64..50, g in 1i64..9, h in 1i64..9) {
            let x = Scalar::quadratic(Q::new(a, g), Q::from_i64(b), 5);
            let y = Scalar::quadratic(Q::from_i64(c), Q::new(e, h), 5);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x.clone());
            }
            let z = Scalar::from_i64(a - c);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }
    }
}
