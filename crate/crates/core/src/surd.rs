//! Exact real numbers of the form `c·√r` with `c` rational and `r` squarefree.
//!
//! Every cosine the crate reports is a `Surd`: the angle formulas are a
//! rational divided by the square root of a rational, which always lands in
//! this shape.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Splits `n = outer² · inner` with `inner` squarefree.
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut outer = 1u64;
    let mut inner = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        outer *= p.pow(e / 2);
        if e % 2 == 1 {
            inner *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    inner *= n;
    (outer, inner)
}

/// `coeff·√radicand` with a squarefree radicand; serialized as its display
/// string, e.g. `"1/7√7"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    coeff: Rational,
    radicand: u64,
}

impl Surd {
    pub fn new(coeff: Rational, radicand: u64) -> Self {
        if coeff.is_zero() || radicand == 0 {
            return Surd::zero();
        }
        let (outer, inner) = squarefree_split(radicand);
        Surd { coeff: coeff * BigInt::from(outer), radicand: inner }
    }

    pub fn rational(q: Rational) -> Self {
        Surd::new(q, 1)
    }

    pub fn zero() -> Self {
        Surd { coeff: Rational::zero(), radicand: 1 }
    }

    pub fn one() -> Self {
        Surd::rational(Rational::one())
    }

    /// The nonnegative square root of a nonnegative rational.
    pub fn sqrt(q: &Rational) -> Result<Self> {
        let (a, b) = rational::to_u64_parts(q)?;
        if a == 0 {
            return Ok(Surd::zero());
        }
        // √(a/b) = (oa/ob)·√ia/√ib = oa/(ob·ib) · √(ia·ib)
        let (oa, ia) = squarefree_split(a);
        let (ob, ib) = squarefree_split(b);
        let g = ia.gcd(&ib);
        let radicand = (ia / g)
            .checked_mul(ib / g)
            .ok_or(Error::Overflow("surd radicand"))?;
        let coeff = Rational::new(BigInt::from(oa) * BigInt::from(g), BigInt::from(ob) * BigInt::from(ib));
        Ok(Surd { coeff, radicand })
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1
    }

    pub fn signum(&self) -> i32 {
        if self.coeff.is_zero() {
            0
        } else if self.coeff.is_positive() {
            1
        } else {
            -1
        }
    }

    /// `c²·r`, exact.
    pub fn square(&self) -> Rational {
        &self.coeff * &self.coeff * BigInt::from(self.radicand)
    }

    pub fn checked_mul(&self, other: &Surd) -> Result<Surd> {
        if self.is_zero() || other.is_zero() {
            return Ok(Surd::zero());
        }
        let g = self.radicand.gcd(&other.radicand);
        let radicand = (self.radicand / g)
            .checked_mul(other.radicand / g)
            .ok_or(Error::Overflow("surd product"))?;
        Ok(Surd { coeff: &self.coeff * &other.coeff * BigInt::from(g), radicand })
    }

    pub fn mul_rational(&self, q: &Rational) -> Surd {
        Surd::new(&self.coeff * q, self.radicand)
    }

    pub fn recip(&self) -> Result<Surd> {
        if self.is_zero() {
            return Err(Error::Parse("reciprocal of zero surd".into()));
        }
        let coeff = (&self.coeff * BigInt::from(self.radicand)).recip();
        Ok(Surd { coeff, radicand: self.radicand })
    }

    pub fn checked_div(&self, other: &Surd) -> Result<Surd> {
        self.checked_mul(&other.recip()?)
    }

    /// Sum of two surds with the same radicand (or either zero).
    pub fn checked_add(&self, other: &Surd) -> Option<Surd> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        (self.radicand == other.radicand)
            .then(|| Surd::new(&self.coeff + &other.coeff, self.radicand))
    }

    pub fn neg(&self) -> Surd {
        Surd { coeff: -self.coeff.clone(), radicand: self.radicand }
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.coeff) * (self.radicand as f64).sqrt()
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        let (s, o) = (self.signum(), other.signum());
        if s != o {
            return s.cmp(&o);
        }
        let by_square = self.square().cmp(&other.square());
        if s < 0 {
            by_square.reverse()
        } else {
            by_square
        }
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for Surd {
    fn from(q: Rational) -> Self {
        Surd::rational(q)
    }
}

impl fmt::Display for Surd {
    /// `a/b`, `a/b√r`, `√r` or `-√r`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 {
            return f.write_str(&rational::format(&self.coeff));
        }
        if self.coeff.is_one() {
            write!(f, "√{}", self.radicand)
        } else if (-self.coeff.clone()).is_one() {
            write!(f, "-√{}", self.radicand)
        } else {
            write!(f, "{}√{}", rational::format(&self.coeff), self.radicand)
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Surd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('√') {
            None => Ok(Surd::rational(rational::parse(s)?)),
            Some((c, r)) => {
                let r: u64 = r.trim().parse().map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
                let c = match c.trim() {
                    "" => Rational::one(),
                    "-" => -Rational::one(),
                    c => rational::parse(c)?,
                };
                Ok(Surd::new(c, r))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    #[test]
    fn squarefree_split_small() {
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(72), (6, 2));
        assert_eq!(squarefree_split(49), (7, 1));
        assert_eq!(squarefree_split(30), (1, 30));
    }

    #[test]
    fn one_over_root_seven() {
        let s = Surd::sqrt(&ratio(1, 7)).unwrap();
        assert_eq!(s, Surd::new(ratio(1, 7), 7));
        assert_eq!(s.to_string(), "1/7√7");
        assert_eq!("1/7√7".parse::<Surd>().unwrap(), s);
    }

    #[test]
    fn sqrt_of_perfect_square_is_rational() {
        assert_eq!(Surd::sqrt(&ratio(4, 9)).unwrap(), Surd::rational(ratio(2, 3)));
        assert!(Surd::sqrt(&ratio(-1, 2)).is_err());
    }

    #[test]
    fn ordering_mixes_radicands() {
        let half = Surd::rational(ratio(1, 2));
        let r13 = Surd::sqrt(&ratio(1, 3)).unwrap();
        assert!(r13 > half);
        assert!(r13.neg() < half.neg());
        assert!(Surd::zero() < r13);
    }

    proptest! {
        #[test]
        fn sqrt_squares_back(n in 0u64..5000, d in 1u64..5000) {
            let q = Rational::new(BigInt::from(n), BigInt::from(d));
            let s = Surd::sqrt(&q).unwrap();
            prop_assert_eq!(s.square(), q);
            prop_assert_eq!(squarefree_split(s.radicand()).0, 1);
        }

        #[test]
        fn product_commutes_and_matches_floats(a in 1u64..300, b in 1u64..300, c in 1u64..300, d in 1u64..300) {
            let x = Surd::sqrt(&Rational::new(BigInt::from(a), BigInt::from(b))).unwrap();
            let y = Surd::sqrt(&Rational::new(BigInt::from(c), BigInt::from(d))).unwrap();
            let xy = x.checked_mul(&y).unwrap();
            prop_assert_eq!(&xy, &y.checked_mul(&x).unwrap());
            prop_assert!((xy.to_f64() - x.to_f64() * y.to_f64()).abs() < 1e-9);
            prop_assert_eq!(x.cmp(&y), x.to_f64().partial_cmp(&y.to_f64()).unwrap().then(x.cmp(&y)));
        }

        #[test]
        fn display_round_trips(n in -400i64..400, d in 1i64..50, r in 1u64..200) {
            let s = Surd::new(ratio(n, d), r);
            prop_assert_eq!(s.to_string().parse::<Surd>().unwrap(), s);
        }
    }
}
