//! Exact rationals with an `i64` fast path that promotes to `BigRational` on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug)]
pub enum Q {
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    pub fn from_i64(n: i64) -> Q {
        Q::Small(n, 1)
    }

    pub fn new(num: i64, den: i64) -> Q {
        assert!(den != 0, "zero denominator");
        Q::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Q {
        let g = gcd_i128(num, den);
        let (mut n, mut d) = if g == 0 { (0, 1) } else { (num / g, den / g) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Q::Small(0, 1);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Q::Small(a, b),
            _ => Q::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Q::Small(a, b),
            _ => Q::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn zero() -> Q {
        Q::Small(0, 1)
    }

    pub fn one() -> Q {
        Q::Small(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(a, _) => *a < 0,
            Q::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(a, _) => BigInt::from(*a),
            Q::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, b) => BigInt::from(*b),
            Q::Big(r) => r.denom().clone(),
        }
    }

    pub fn inv(&self) -> Option<Q> {
        match self {
            Q::Small(0, _) => None,
            Q::Small(a, b) => Some(Q::from_i128(*b as i128, *a as i128)),
            Q::Big(r) => Some(Q::from_big(r.recip())),
        }
    }

    /// Parses `n` or `n/m` with optional sign.
    pub fn parse(s: &str) -> Option<Q> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let ok = |t: &str| {
            let t = t.strip_prefix('-').unwrap_or(t);
            !t.is_empty() && t.bytes().all(|c| c.is_ascii_digit())
        };
        if !ok(num) || !ok(den) || den.starts_with('-') {
            return None;
        }
        let n: BigInt = num.parse().ok()?;
        let d: BigInt = den.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::from_big(BigRational::new(n, d)))
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Q) -> bool {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => a == c && b == d,
            (Q::Big(x), Q::Big(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Q::Small(a, b) => {
                0u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Q::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Q {
    fn cmp(&self, other: &Q) -> Ordering {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    fn add(self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(0, _), _) => o.clone(),
            (_, Q::Small(0, _)) => self.clone(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                if b == d {
                    Q::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                    Q::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Q::from_big(self.to_big() + o.to_big()),
        }
    }
}

impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    fn sub(self, o: &Q) -> Q {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    fn mul(self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(0, _), _) | (_, Q::Small(0, _)) => Q::zero(),
            (Q::Small(1, 1), _) => o.clone(),
            (_, Q::Small(1, 1)) => self.clone(),
            (Q::Small(a, b), Q::Small(c, d)) => {
                Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Q::from_big(self.to_big() * o.to_big()),
        }
    }
}

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, o: &Q) -> Q {
        let inv = o.inv().expect("division by zero rational");
        self * &inv
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::Small(a, b) => match a.checked_neg() {
                Some(n) => Q::Small(n, *b),
                None => Q::from_i128(-(*a as i128), *b as i128),
            },
            Q::Big(r) => Q::from_big(-r),
        }
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        -&self
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(a, 1) => write!(f, "{a}"),
            Q::Small(a, b) => write!(f, "{a}/{b}"),
            Q::Big(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

/// Largest integer k with k*k dividing n, used to make discriminants square free.
pub fn square_free_part(n: i64) -> (i64, i64) {
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.abs();
    let mut outside = 1i64;
    let mut p = 2i64;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            outside *= p;
        }
        p += 1;
    }
    (sign * m, outside)
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn promotes_on_overflow() {
        let big = Q::from_i64(i64::MAX);
        let s = &big + &big;
        assert!(matches!(s, Q::Big(_)));
        let back = &s - &big;
        assert_eq!(back, big);
        assert!(matches!(back, Q::Small(..)));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(Q::new(2, -4), Q::new(-1, 2));
        assert_eq!(Q::new(0, 5), Q::zero());
        assert_eq!(Q::parse("6/4"), Some(Q::new(3, 2)));
        assert_eq!(Q::parse("-7"), Some(Q::from_i64(-7)));
        assert_eq!(Q::parse("1/0"), None);
        assert_eq!(Q::parse("1/-2"), None);
    }

    #[test]
    fn square_free() {
        assert_eq!(square_free_part(12), (3, 2));
        assert_eq!(square_free_part(5), (5, 1));
        assert_eq!(square_free_part(-8), (-2, 2));
    }
}
