//! Clebsch–Gordan coefficients and the 6j-symbol. Every angular momentum
//! crosses this API as a twice-value, so all arithmetic stays integral.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{big, fact_ref, int, rat, sign, Rational, SqrtRational, SqrtSum};

pub use crate::sl2::triangle;

/// Twice a non-negative half-integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoJ(pub u32);

impl TwoJ {
    pub fn half(self) -> Rational {
        rat(self.0 as i64, 2)
    }
}

impl From<u32> for TwoJ {
    fn from(x: u32) -> Self {
        TwoJ(x)
    }
}

/// `{j1 j2 j3; j4 j5 j6}` as twice-values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SixJInput(pub [u32; 6]);

impl SixJInput {
    pub fn new(j: [u32; 6]) -> Self {
        SixJInput(j)
    }

    pub fn triads(&self) -> [(u32, u32, u32); 4] {
        let [j1, j2, j3, j4, j5, j6] = self.0;
        [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)]
    }

    /// All four triangle conditions hold.
    pub fn is_admissible(&self) -> bool {
        self.triads().iter().all(|&(a, b, c)| triangle(a, b, c))
    }

    /// Some triad is degenerate (`c = a + b` up to order).
    pub fn has_degenerate_triad(&self) -> bool {
        self.triads()
            .iter()
            .any(|&(a, b, c)| a + b == c || a + c == b || b + c == a)
    }

    /// The 24 images under column permutations and upper/lower swaps in
    /// pairs of columns.
    pub fn symmetry_images(&self) -> [SixJInput; 24] {
        let cols = [(self.0[0], self.0[3]), (self.0[1], self.0[4]), (self.0[2], self.0[5])];
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        const FLIPS: [[bool; 3]; 4] = [
            [false, false, false],
            [true, true, false],
            [true, false, true],
            [false, true, true],
        ];
        let mut out = [*self; 24];
        let mut n = 0;
        for p in PERMS {
            for fl in FLIPS {
                let mut t = [0u32; 6];
                for k in 0..3 {
                    let (u, l) = cols[p[k]];
                    let (u, l) = if fl[k] { (l, u) } else { (u, l) };
                    t[k] = u;
                    t[k + 3] = l;
                }
                out[n] = SixJInput(t);
                n += 1;
            }
        }
        out
    }

    pub fn canonical(&self) -> SixJInput {
        *self.symmetry_images().iter().min().expect("24 images")
    }
}

impl fmt::Display for SixJInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = self.0;
        write!(f, "{{{} {} {}; {} {} {}}}", j[0], j[1], j[2], j[3], j[4], j[5])
    }
}

fn fact(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    fact_ref(n as u64).into_owned()
}

/// `Δ(j1,j2,j3)^2`, zero when the triangle fails.
pub fn delta_squared(a: u32, b: u32, c: u32) -> Rational {
    if !triangle(a, b, c) {
        return Rational::zero();
    }
    let (a, b, c) = (a as i64, b as i64, c as i64);
    let num = fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((-a + b + c) / 2);
    Rational::new(num, fact((a + b + c) / 2 + 1))
}

pub fn delta(a: u32, b: u32, c: u32) -> SqrtRational {
    SqrtRational::sqrt(&delta_squared(a, b, c)).expect("non-negative")
}

/// Clebsch–Gordan coefficient `C^{j3,m3}_{j1,m1; j2,m2}`.
pub fn cgc(j1: u32, m1: i32, j2: u32, m2: i32, j3: u32, m3: i32) -> Result<SqrtRational> {
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        if m.unsigned_abs() > j || (j as i64 - m as i64) % 2 != 0 {
            return Err(Error::Projection { j, m });
        }
    }
    if m1 + m2 != m3 || !triangle(j1, j2, j3) {
        return Ok(SqrtRational::zero());
    }
    let h = |x: i64| x / 2;
    let (j1, j2, j3) = (j1 as i64, j2 as i64, j3 as i64);
    let (m1, m2, m3) = (m1 as i64, m2 as i64, m3 as i64);
    let mut radicand = delta_squared(j1 as u32, j2 as u32, j3 as u32) * int(j3 + 1);
    let mut prod = BigInt::one();
    for x in [j1 + m1, j1 - m1, j2 + m2, j2 - m2, j3 + m3, j3 - m3] {
        prod *= fact(h(x));
    }
    radicand *= big(prod);
    let args = |r: i64| {
        [
            r,
            h(j1 + j2 - j3) - r,
            h(j1 - m1) - r,
            h(j2 + m2) - r,
            h(j3 - j2 + m1) + r,
            h(j3 - j1 - m2) + r,
        ]
    };
    let mut sum = Rational::zero();
    for r in 0..=h(j1 + j2 - j3) {
        let a = args(r);
        if a.iter().any(|&x| x < 0) {
            continue;
        }
        let den: BigInt = a.iter().map(|&x| fact(x)).product();
        sum += Rational::new(BigInt::from(sign(r)), den);
    }
    Ok(SqrtRational::sqrt(&radicand)?.scale(&sum))
}

/// Alternating sum of the Racah closed form, without the Δ prefactor.
/// Returned as `numerator / denominator` with an integer numerator so that
/// vanishing can be tested without rational normalization.
fn racah_sum_parts(j: &[u32; 6]) -> (BigInt, BigInt) {
    let [j1, j2, j3, j4, j5, j6] = j.map(|x| x as i64);
    let alpha = [
        (j1 + j2 + j3) / 2,
        (j1 + j5 + j6) / 2,
        (j4 + j2 + j6) / 2,
        (j4 + j5 + j3) / 2,
    ];
    let beta = [
        (j2 + j3 + j5 + j6) / 2,
        (j1 + j3 + j4 + j6) / 2,
        (j1 + j2 + j4 + j5) / 2,
    ];
    let tmin = *alpha.iter().max().expect("four");
    let tmax = *beta.iter().min().expect("three");
    // Scale every term by L = prod (tmax - α)! prod (β - tmin)!.
    let mut den = BigInt::one();
    for a in alpha {
        den *= fact(tmax - a);
    }
    for b in beta {
        den *= fact(b - tmin);
    }
    let mut num = BigInt::zero();
    for t in tmin..=tmax {
        let mut term = fact(t + 1);
        for a in alpha {
            for x in (t - a + 1)..=(tmax - a) {
                term *= x;
            }
        }
        for b in beta {
            for x in (b - t + 1)..=(b - tmin) {
                term *= x;
            }
        }
        if t % 2 == 0 {
            num += term;
        } else {
            num -= term;
        }
    }
    (num, den)
}

/// 6j-symbol via the Racah sum over `t` with the four-Δ prefactor.
pub fn sixj_racah(input: &SixJInput) -> SqrtRational {
    if !input.is_admissible() {
        return SqrtRational::zero();
    }
    let (num, den) = racah_sum_parts(&input.0);
    if num.is_zero() {
        return SqrtRational::zero();
    }
    let [j1, j2, j3, j4, j5, j6] = input.0;
    let pre =
        delta_squared(j1, j2, j3) * delta_squared(j3, j4, j5) * delta_squared(j2, j4, j6) * delta_squared(j1, j5, j6);
    SqrtRational::sqrt(&pre)
        .expect("non-negative")
        .scale(&Rational::new(num, den))
}

/// 6j-symbol via the single-sum formula with the ratio-of-R prefactor.
pub fn sixj_ratio(input: &SixJInput) -> SqrtRational {
    if !input.is_admissible() {
        return SqrtRational::zero();
    }
    // Work with doubled values; every factorial argument below is even.
    let t = input.0.map(|x| x as i64);
    let jx = |k: usize| t[k - 1];
    let r2 = |z: usize, x: usize, y: usize| {
        let (x, y, z) = (jx(x), jx(y), jx(z));
        Rational::new(
            fact((x + y - z) / 2),
            fact((x - y + z) / 2) * fact((-x + y + z) / 2) * fact((x + y + z) / 2 + 1),
        )
    };
    let ratio = r2(1, 2, 3) * r2(4, 3, 5) / (r2(1, 5, 6) * r2(4, 2, 6));
    let [j1, j2, j3, j4, j5, j6] = t;
    let mut sum = Rational::zero();
    let mut tt = 0i64;
    loop {
        let num = [
            (-j1 + j5 + j6) / 2 + tt,
            (j2 - j4 + j6) / 2 + tt,
            (j1 + j3 + j4 - j6) / 2 - tt,
        ];
        let den = [
            tt,
            (j1 + j5 - j6) / 2 - tt,
            (j2 + j4 - j6) / 2 - tt,
            (-j1 + j3 - j4 + j6) / 2 + tt,
            j6 + 1 + tt,
        ];
        if num[2] < 0 || den[1] < 0 || den[2] < 0 {
            break;
        }
        if num.iter().chain(&den).all(|&x| x >= 0) {
            let n: BigInt = num.iter().map(|&x| fact(x)).product();
            let d: BigInt = den.iter().map(|&x| fact(x)).product();
            sum += Rational::new(n * sign(tt), d);
        }
        tt += 1;
    }
    let s = sign((j1 + j2 + j4 + j5) / 2);
    SqrtRational::sqrt(&ratio).expect("non-negative").scale(&(sum * int(s)))
}

/// The 6j-symbol. Zero when a triangle fails. With debug assertions on, both
/// closed forms are evaluated and must agree.
pub fn sixj(input: &SixJInput) -> Result<SqrtRational> {
    let v = sixj_racah(input);
    if cfg!(debug_assertions) && v != sixj_ratio(input) {
        return Err(Error::FormulaMismatch(input.0));
    }
    Ok(v)
}

/// Non-trivial zero test: all triangles hold and the Racah sum vanishes.
pub fn is_nontrivial_zero(input: &SixJInput) -> bool {
    input.is_admissible() && racah_sum_parts(&input.0).0.is_zero()
}

/// Coefficients of the three-term recurrence in the first argument:
/// `i1 E(i1+1) {i1+1 ..} + F(i1) {i1 ..} + (i1+1) E(i1) {i1-1 ..} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeCoefficients {
    /// `E(i1)`, `None` when the radicand is negative.
    pub e: Option<SqrtRational>,
    pub f: Rational,
}

/// `E(i1)` and `F(i1)` for `{i1 j2 j3; j4 j5 j6}` (twice-values).
pub fn be_coefficients(i: [u32; 6]) -> BeCoefficients {
    let h = i.map(|x| rat(x as i64, 2));
    let one = Rational::one();
    let sq = |x: &Rational| x * x;
    let x = &h[0];
    let radicand = (sq(x) - sq(&(&h[1] - &h[2])))
        * (sq(&(&h[1] + &h[2] + &one)) - sq(x))
        * (sq(x) - sq(&(&h[4] - &h[5])))
        * (sq(&(&h[4] + &h[5] + &one)) - sq(x));
    let e = if radicand.is_negative() {
        None
    } else {
        Some(SqrtRational::sqrt(&radicand).expect("non-negative"))
    };
    let c: Vec<Rational> = h.iter().map(|x| x * (x + &one)).collect();
    let f = (int(2) * x + &one)
        * (&c[0] * (-&c[0] + &c[1] + &c[2]) + &c[4] * (&c[0] + &c[1] - &c[2]) + &c[5] * (&c[0] - &c[1] + &c[2])
            - int(2) * &c[0] * &c[3]);
    BeCoefficients { e, f }
}

/// Residual of the recurrence at `i` (requires `i[0] >= 2`). Terms whose 6j
/// vanishes are dropped.
pub fn be_residual(i: [u32; 6], sixj_fn: &mut impl FnMut(&SixJInput) -> Result<SqrtRational>) -> Result<SqrtSum> {
    if i[0] < 2 {
        return Err(Error::Parameter("recurrence needs 2*i1 >= 2".into()));
    }
    let mut up = i;
    up[0] += 2;
    let mut down = i;
    down[0] -= 2;
    let x = rat(i[0] as i64, 2);
    let mut sum = SqrtSum::new();
    for (args, coeff_at, weight) in [(up, up, x.clone()), (down, i, x + int(1))] {
        let w = sixj_fn(&SixJInput(args))?;
        if w.is_zero() {
            continue;
        }
        let e = be_coefficients(coeff_at).e.ok_or(Error::NegativeRadicand)?;
        sum.add(&e.mul(&w).scale(&weight));
    }
    let mid = sixj_fn(&SixJInput(i))?;
    sum.add(&mid.scale(&be_coefficients(i).f));
    Ok(sum)
}

/// Every admissible tuple with `t[k] <= bounds[k]` whose 6j vanishes, sorted
/// lexicographically. Evaluations are shared across each symmetry orbit.
pub fn find_sixj_zeros(bounds: [u32; 6], filter: impl Fn(&SixJInput) -> bool + Sync) -> Vec<SixJInput> {
    let candidates: Vec<SixJInput> = admissible_in_box(bounds).into_iter().filter(|x| filter(x)).collect();
    let orbits: BTreeSet<SixJInput> = candidates.iter().map(SixJInput::canonical).collect();
    let orbits: Vec<SixJInput> = orbits.into_iter().collect();
    let zero: HashMap<SixJInput, bool> = orbits
        .par_iter()
        .map(|c| (*c, is_nontrivial_zero(c)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    candidates.into_iter().filter(|x| zero[&x.canonical()]).collect()
}

/// Admissible tuples inside a box, in lexicographic order.
pub fn admissible_in_box(bounds: [u32; 6]) -> Vec<SixJInput> {
    let mut out = Vec::new();
    for j1 in 0..=bounds[0] {
        for j2 in 0..=bounds[1] {
            for j3 in 0..=bounds[2] {
                if !triangle(j1, j2, j3) {
                    continue;
                }
                for j4 in 0..=bounds[3] {
                    for j5 in 0..=bounds[4] {
                        if !triangle(j4, j5, j3) {
                            continue;
                        }
                        for j6 in 0..=bounds[5] {
                            if triangle(j1, j5, j6) && triangle(j4, j2, j6) {
                                out.push(SixJInput([j1, j2, j3, j4, j5, j6]));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Scalar `s` with `CG-map = s * iota` for the embedding `V(k) -> V(a) ⊗ V(b)`:
/// `s = sqrt(k+1) / (Δ(a,b,k) * ((a+b+k)/2 + 1))`.
pub fn cg_iota_scalar(a: u32, b: u32, k: u32) -> Result<SqrtRational> {
    if !triangle(a, b, k) {
        return Err(Error::Triangle(a, b, k));
    }
    let d = delta(a, b, k).scale(&int(((a + b + k) / 2 + 1) as i64));
    let num = SqrtRational::sqrt(&int(k as i64 + 1))?;
    Ok(num.div(&d).expect("Δ is nonzero on a triangle"))
}
