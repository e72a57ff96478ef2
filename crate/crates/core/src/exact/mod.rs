//! Exact arithmetic: rationals, square roots of rationals, matrices over Q.

mod matrix;
mod sqrt;

pub use matrix::{intersect_spans, kernel, rank, rref, span_basis, EchelonBasis, QMatrix};
pub use sqrt::{squarefree_split, SqrtRational, SqrtSum};

use std::borrow::Cow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

pub type Rational = BigRational;

const FACTORIAL_TABLE: usize = 256;

static FACTORIALS: Lazy<Vec<BigInt>> = Lazy::new(|| {
    let mut out = Vec::with_capacity(FACTORIAL_TABLE);
    let mut acc = BigInt::one();
    out.push(acc.clone());
    for n in 1..FACTORIAL_TABLE {
        acc *= n;
        out.push(acc.clone());
    }
    out
});

pub(crate) fn fact_ref(n: u64) -> Cow<'static, BigInt> {
    if (n as usize) < FACTORIAL_TABLE {
        Cow::Borrowed(&FACTORIALS[n as usize])
    } else {
        let mut acc = FACTORIALS[FACTORIAL_TABLE - 1].clone();
        for k in FACTORIAL_TABLE as u64..=n {
            acc *= k;
        }
        Cow::Owned(acc)
    }
}

pub fn factorial(n: u64) -> BigInt {
    fact_ref(n).into_owned()
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Rational with integer numerator and denominator content stripped: returns
/// the lcm of denominators and gcd of numerators over a list.
pub(crate) fn content(values: &[&Rational]) -> Option<Rational> {
    use num_integer::Integer;
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        if v.is_zero() {
            continue;
        }
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if num.is_zero() {
        None
    } else {
        Some(Rational::new(num.abs(), den))
    }
}
