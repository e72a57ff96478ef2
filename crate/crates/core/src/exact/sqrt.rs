use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Splits `n = s^2 * r` with `r` squarefree, by trial division.
///
/// Only intended for numbers whose prime factors are small (products of
/// factorials); a large prime factor makes this slow.
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    if let Some(small) = n.to_u128() {
        let (s, r) = split_u128(small);
        return (BigUint::from(s), BigUint::from(r));
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut r = BigUint::one();
    let mut p: u64 = 2;
    loop {
        if let Some(small) = rest.to_u128() {
            let (s2, r2) = split_u128_from(small, p);
            return (s * s2, r * r2);
        }
        let mut e = 0u32;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            s *= BigUint::from(p).pow(e / 2);
            if e % 2 == 1 {
                r *= p;
            }
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
}

fn split_u128(n: u128) -> (u128, u128) {
    split_u128_from(n, 2)
}

fn split_u128_from(mut n: u128, start: u64) -> (u128, u128) {
    let mut s: u128 = 1;
    let mut r: u128 = 1;
    let mut p = start as u128;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            for _ in 0..e / 2 {
                s *= p;
            }
            if e % 2 == 1 {
                r *= p;
            }
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    (s, r * n)
}

/// `coeff * sqrt(radicand)` with `radicand` squarefree (and 1 when zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    coeff: Rational,
    radicand: BigUint,
}

impl SqrtRational {
    pub fn new(coeff: Rational, radicand: BigUint) -> Self {
        if coeff.is_zero() || radicand.is_zero() {
            return Self::zero();
        }
        let (s, r) = squarefree_split(&radicand);
        Self {
            coeff: coeff * Rational::from_integer(BigInt::from(s)),
            radicand: r,
        }
    }

    pub fn zero() -> Self {
        Self {
            coeff: Rational::zero(),
            radicand: BigUint::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Self {
            coeff: q,
            radicand: BigUint::one(),
        }
    }

    /// Square root of a non-negative rational.
    pub fn sqrt(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(n/d) = sqrt(n*d)/d
        let nd = (q.numer() * q.denom()).to_biguint().expect("positive");
        let (s, r) = squarefree_split(&nd);
        Ok(Self {
            coeff: Rational::new(BigInt::from(s), q.denom().clone()),
            radicand: r,
        })
    }

    /// `sign * sqrt(q)`; only the sign of `sign` matters.
    pub fn signed_sqrt(sign: i64, q: &Rational) -> Result<Self> {
        let mut out = Self::sqrt(q)?;
        if sign < 0 {
            out.coeff = -out.coeff;
        }
        Ok(out)
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_one()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeff.clone())
    }

    /// The square, always rational.
    pub fn square(&self) -> Rational {
        &self.coeff * &self.coeff * Rational::from_integer(BigInt::from(self.radicand.clone()))
    }

    pub fn signum(&self) -> i64 {
        match self.coeff.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.radicand.gcd(&other.radicand);
        let r = (&self.radicand / &g) * (&other.radicand / &g);
        Self {
            coeff: &self.coeff * &other.coeff * Rational::from_integer(BigInt::from(g)),
            radicand: r,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            coeff: &self.coeff * q,
            radicand: self.radicand.clone(),
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let r = Rational::from_integer(BigInt::from(self.radicand.clone()));
        Some(Self {
            coeff: (&self.coeff * r).recip(),
            radicand: self.radicand.clone(),
        })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self.mul(&r))
    }

    pub fn neg(&self) -> Self {
        Self {
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }

    /// Sum when both share a radicand (or either is zero).
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.radicand != other.radicand {
            return None;
        }
        let c = &self.coeff + &other.coeff;
        if c.is_zero() {
            Some(Self::zero())
        } else {
            Some(Self {
                coeff: c,
                radicand: self.radicand.clone(),
            })
        }
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() || self.is_zero() {
            write!(f, "{}", format_rational(&self.coeff))
        } else {
            write!(f, "{}*sqrt({})", format_rational(&self.coeff), self.radicand)
        }
    }
}

impl FromStr for SqrtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once("*sqrt(") {
            None => Ok(Self::from_rational(parse_rational(s)?)),
            Some((c, rest)) => {
                let r = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("bad surd {s:?}")))?;
                let r: BigUint = r
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
                Ok(Self::new(parse_rational(c)?, r))
            }
        }
    }
}

/// Sum of surds, grouped by squarefree radicand. Square roots of distinct
/// squarefree integers are linearly independent over Q, so the sum is zero
/// exactly when every group vanishes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SqrtSum {
    terms: BTreeMap<BigUint, Rational>,
}

impl SqrtSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: &SqrtRational) {
        if x.is_zero() {
            return;
        }
        let slot = self.terms.entry(x.radicand.clone()).or_insert_with(Rational::zero);
        *slot += &x.coeff;
        if slot.is_zero() {
            self.terms.remove(&x.radicand);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = SqrtRational> + '_ {
        self.terms.iter().map(|(r, c)| SqrtRational {
            coeff: c.clone(),
            radicand: r.clone(),
        })
    }
}

impl fmt::Display for SqrtSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn sr(c: Rational, r: u64) -> SqrtRational {
        SqrtRational::new(c, BigUint::from(r))
    }

    #[test]
    fn split() {
        let (s, r) = squarefree_split(&BigUint::from(72u32));
        assert_eq!((s, r), (BigUint::from(6u32), BigUint::from(2u32)));
        let big = BigUint::from(3u32).pow(90) * BigUint::from(10u32);
        let (s, r) = squarefree_split(&big);
        assert_eq!(s, BigUint::from(3u32).pow(45));
        assert_eq!(r, BigUint::from(10u32));
    }

    #[test]
    fn products() {
        let a = sr(rat(1, 2), 6);
        let b = sr(rat(1, 3), 10);
        assert_eq!(a.mul(&b), sr(rat(1, 3), 15));
        assert_eq!(a.mul(&a.recip().unwrap()), SqrtRational::one());
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(SqrtRational::sqrt(&rat(1, 6)).unwrap(), sr(rat(1, 6), 6));
        assert_eq!(SqrtRational::sqrt(&rat(9, 4)).unwrap().to_rational(), Some(rat(3, 2)));
        assert!(SqrtRational::sqrt(&rat(-1, 4)).is_err());
    }

    #[test]
    fn strings() {
        let x = sr(rat(-2, 3), 5);
        assert_eq!(x.to_string(), "-2/3*sqrt(5)");
        assert_eq!("-2/3*sqrt(5)".parse::<SqrtRational>().unwrap(), x);
        assert_eq!(sr(rat(4, 1), 1).to_string(), "4");
        assert_eq!("1*sqrt(8)".parse::<SqrtRational>().unwrap(), sr(rat(2, 1), 2));
    }

    #[test]
    fn surd_sums() {
        let mut s = SqrtSum::new();
        s.add(&sr(rat(1, 2), 2));
        s.add(&sr(rat(1, 3), 3));
        assert!(!s.is_zero());
        s.add(&sr(rat(-1, 2), 2));
        s.add(&sr(rat(-1, 3), 3));
        assert!(s.is_zero());
    }
}
