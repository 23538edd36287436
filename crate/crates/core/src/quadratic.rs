//! Elements `a + b·√d` of the real quadratic field ℚ(√d), `d` squarefree.
//!
//! The two-box model needs δ = √|G| and δ⁻¹ as scalars; the smallest field
//! holding them is ℚ(√d) with `d` the squarefree part of |G|. When |G| is a
//! perfect square the field degenerates to ℚ and `b` stays zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{self, Rational};
use crate::surd::{squarefree_split, Surd};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    pub rational: Rational,
    pub irrational: Rational,
    radicand: u64,
}

impl QuadraticNumber {
    pub fn new(rational: Rational, irrational: Rational, radicand: u64) -> Self {
        let (outer, inner) = squarefree_split(radicand.max(1));
        let irrational = irrational * BigInt::from(outer);
        if inner == 1 {
            return QuadraticNumber { rational: rational + irrational, irrational: Rational::zero(), radicand: 1 };
        }
        QuadraticNumber { rational, irrational, radicand: inner }
    }

    pub fn from_rational(q: Rational, radicand: u64) -> Self {
        QuadraticNumber::new(q, Rational::zero(), radicand)
    }

    pub fn zero(radicand: u64) -> Self {
        QuadraticNumber::from_rational(Rational::zero(), radicand)
    }

    pub fn one(radicand: u64) -> Self {
        QuadraticNumber::from_rational(Rational::one(), radicand)
    }

    /// `√n` inside ℚ(√d) where `d` is the squarefree part of `n`.
    pub fn sqrt_of(n: u64) -> Self {
        let (outer, inner) = squarefree_split(n);
        QuadraticNumber::new(Rational::zero(), rational::int(outer as i64), inner)
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.irrational.is_zero().then_some(&self.rational)
    }

    pub fn from_surd(s: &Surd, radicand: u64) -> Option<Self> {
        if s.is_rational() {
            return Some(QuadraticNumber::from_rational(s.coeff().clone(), radicand));
        }
        let field = squarefree_split(radicand).1;
        (s.radicand() == field).then(|| QuadraticNumber::new(Rational::zero(), s.coeff().clone(), field))
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &self.rational * &self.rational - &self.irrational * &self.irrational * BigInt::from(self.radicand)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QuadraticNumber {
            rational: &self.rational / &n,
            irrational: -(&self.irrational / &n),
            radicand: self.radicand,
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        QuadraticNumber {
            rational: &self.rational * q,
            irrational: &self.irrational * q,
            radicand: self.radicand,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.rational) + rational::to_f64(&self.irrational) * (self.radicand as f64).sqrt()
    }

    fn common_radicand(&self, other: &Self) -> u64 {
        match (self.irrational.is_zero(), other.irrational.is_zero()) {
            (true, _) => other.radicand.max(self.radicand),
            (_, true) => self.radicand,
            _ => {
                assert_eq!(self.radicand, other.radicand, "quadratic numbers from different fields");
                self.radicand
            }
        }
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let d = self.common_radicand(rhs);
        QuadraticNumber::new(&self.rational + &rhs.rational, &self.irrational + &rhs.irrational, d)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self + &(-rhs)
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber { rational: -self.rational.clone(), irrational: -self.irrational.clone(), radicand: self.radicand }
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let d = self.common_radicand(rhs);
        let dd = BigInt::from(d);
        QuadraticNumber::new(
            &self.rational * &rhs.rational + &self.irrational * &rhs.irrational * dd,
            &self.rational * &rhs.irrational + &self.irrational * &rhs.rational,
            d,
        )
    }
}

impl fmt::Display for QuadraticNumber {
    /// `a/b` or `a/b+c/d√n`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irrational.is_zero() {
            return f.write_str(&rational::format(&self.rational));
        }
        let sign = if self.irrational < Rational::zero() { "-" } else { "+" };
        let abs = if sign == "-" { -self.irrational.clone() } else { self.irrational.clone() };
        write!(f, "{}{}{}√{}", rational::format(&self.rational), sign, rational::format(&abs), self.radicand)
    }
}

impl std::str::FromStr for QuadraticNumber {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let s = s.trim();
        let Some((head, radicand)) = s.split_once('√') else {
            return Ok(QuadraticNumber::from_rational(rational::parse(s)?, 1));
        };
        let radicand: u64 = radicand
            .trim()
            .parse()
            .map_err(|_| crate::Error::Parse(format!("bad radicand in {s:?}")))?;
        // split at the last sign that is not the leading one
        let cut = head
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(|| crate::Error::Parse(format!("expected a+b√n, got {s:?}")))?;
        let rational_part = rational::parse(&head[..cut])?;
        let coeff = match &head[cut..] {
            "+" => Rational::one(),
            "-" => -Rational::one(),
            c => rational::parse(c.trim_start_matches('+'))?,
        };
        Ok(QuadraticNumber::new(rational_part, coeff, radicand))
    }
}
