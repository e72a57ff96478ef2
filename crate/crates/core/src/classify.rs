//! Which factor sequences carry a uniserial module, the images `I` and `J`
//! of the product maps, and the scalar identity tying the composite
//! embedding to the 6j-symbol.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::constructions::{build_from_sequence, SequenceOutcome};
use crate::error::{Error, Result};
use crate::exact::{binomial, int, rref, sign, EchelonBasis, QMatrix, Rational, SqrtRational};
use crate::sl2::{decompose, hom_embedding, iota, iota_images, irrep, triangle, Convention, Decomposition, Sl2Rep};
use crate::wigner::{delta, delta_squared, sixj, SixJInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdmissibleStatus {
    NotAdmissible,
    UniqueModule,
    OneParameterFamily,
}

impl fmt::Display for AdmissibleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AdmissibleStatus::NotAdmissible => "NotAdmissible",
            AdmissibleStatus::UniqueModule => "UniqueModule",
            AdmissibleStatus::OneParameterFamily => "OneParameterFamily",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdmissibleVerdict {
    pub status: AdmissibleStatus,
    pub witness: Option<&'static str>,
}

fn is_progression(seq: &[u32], m: u32) -> bool {
    seq.windows(2).all(|w| w[1] == w[0] + m)
}

fn rule(seq: &[u32], m: u32) -> Option<(AdmissibleStatus, &'static str)> {
    use AdmissibleStatus::*;
    match *seq {
        [_] => Some((UniqueModule, "single factor")),
        [a, b] => triangle(a, b, m).then_some((UniqueModule, "two factors")),
        [0, b, c] if b == m && c <= 2 * m && (2 * m - c) % 4 == 0 => Some((UniqueModule, "V(0), V(m), V(c)")),
        [0, b, c, 0] if b == m && c == m && m % 4 == 0 => Some((OneParameterFamily, "V(0), V(m), V(m), V(0)")),
        _ if is_progression(seq, m) => Some((UniqueModule, "arithmetic progression")),
        _ => None,
    }
}

/// Closed-form classification, testing the sequence and its reversal.
pub fn is_admissible(seq: &[u32], m: u32) -> Result<AdmissibleVerdict> {
    if seq.is_empty() {
        return Err(Error::Parameter("empty sequence".into()));
    }
    if m == 0 {
        return Err(Error::Parameter("m must be positive".into()));
    }
    let rev: Vec<u32> = seq.iter().rev().copied().collect();
    Ok(match rule(seq, m).or_else(|| rule(&rev, m)) {
        Some((status, w)) => AdmissibleVerdict {
            status,
            witness: Some(w),
        },
        None => AdmissibleVerdict {
            status: AdmissibleStatus::NotAdmissible,
            witness: None,
        },
    })
}

/// Brute-force admissibility: assemble the superdiagonal module and test
/// whether the radical acts abelianly.
pub fn is_admissible_constructive(seq: &[u32], m: u32) -> Result<bool> {
    if seq.windows(2).any(|w| !triangle(w[0], w[1], m)) {
        return Ok(false);
    }
    let scalars = vec![Rational::one(); seq.len().saturating_sub(1)];
    Ok(matches!(
        build_from_sequence(seq, m, &scalars)?,
        SequenceOutcome::Module(_)
    ))
}

fn require_triangle(a: u32, b: u32, c: u32) -> Result<()> {
    if triangle(a, b, c) {
        Ok(())
    } else {
        Err(Error::Triangle(a, b, c))
    }
}

/// Closed form for when `V(a), V(b), V(c)` is admissible, up to swapping
/// `a` and `c`.
pub fn length3_condition4(a: u32, b: u32, c: u32, m: u32) -> Result<bool> {
    require_triangle(a, b, m)?;
    require_triangle(b, c, m)?;
    let one_way = |a: u32, b: u32, c: u32| {
        (c == 0 && b == m && a % 4 == (2 * m) % 4 && a <= 2 * m) || (b == c + m && a == c + 2 * m)
    };
    Ok(one_way(a, b, c) || one_way(c, b, a))
}

/// Highest weights `k` of the image of `V(p) ⊗ V(q)` in `Hom(V(c), V(a))`,
/// and, when `p = q`, of the image of `Λ² V(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageSets {
    pub i: BTreeSet<u32>,
    pub j: Option<BTreeSet<u32>>,
}

fn j_residue(p: u32) -> u32 {
    (2 * p as i64 - 2).rem_euclid(4) as u32
}

/// `I` and `J` from the vanishing pattern of `{q k p; a b c}` (twice-values).
#[allow(non_snake_case)]
pub fn compute_I_J(a: u32, b: u32, c: u32, p: u32, q: u32) -> Result<ImageSets> {
    require_triangle(a, b, p)?;
    require_triangle(b, c, q)?;
    let mut i = BTreeSet::new();
    for k in 0..=(p + q).min(a + c) {
        let x = SixJInput([q, k, p, a, b, c]);
        if x.is_admissible() && !sixj(&x)?.is_zero() {
            i.insert(k);
        }
    }
    let j = (p == q).then(|| i.iter().copied().filter(|k| k % 4 == j_residue(p)).collect());
    Ok(ImageSets { i, j })
}

/// Decomposition of the sl(2)-module spanned by the given maps inside
/// `Hom(V(c), V(a))`, acting by `x.A = ρ_a(x) A - A ρ_c(x)`.
fn hom_span_decomposition(maps: &[QMatrix], a: u32, c: u32) -> Result<Decomposition> {
    let ra = irrep(a, Convention::DividedPower);
    let rc = irrep(c, Convention::DividedPower);
    let dim = (a as usize + 1) * (c as usize + 1);
    let mut basis = EchelonBasis::new(dim);
    for x in maps {
        basis.insert(&x.flatten());
    }
    let d = basis.len();
    let cols = c as usize + 1;
    let unflatten =
        |v: &[Rational]| QMatrix::from_rows(v.chunks(cols).map(|r| r.to_vec()).collect()).expect("rectangular");
    let act = |x: &QMatrix, y: &QMatrix| -> Result<QMatrix> {
        let mut out = QMatrix::zeros(d, d);
        for (col, row) in basis.rows().iter().enumerate() {
            let m = unflatten(row);
            let img = x.try_mul(&m)?.try_sub(&m.try_mul(y)?)?;
            let coords = basis
                .coordinates(&img.flatten())
                .ok_or_else(|| Error::Parameter("span is not sl(2)-stable".into()))?;
            for (r, v) in coords.into_iter().enumerate() {
                out.set(r, col, v);
            }
        }
        Ok(out)
    };
    let rep = Sl2Rep::new(
        act(ra.h(), rc.h())?,
        act(ra.e(), rc.e())?,
        act(ra.f(), rc.f())?,
        Convention::DividedPower,
    )?;
    decompose(&rep)
}

fn products(a: u32, b: u32, c: u32, p: u32, q: u32) -> Result<(Vec<QMatrix>, Vec<QMatrix>)> {
    let f = hom_embedding(p, b, a, Convention::DividedPower)?;
    let g = hom_embedding(q, c, b, Convention::DividedPower)?;
    Ok((f, g))
}

/// `I` and `J` computed directly: span of `f(v_i) g(w_j)` (and of the
/// antisymmetrized products when `p = q`), decomposed into irreducibles.
pub fn span_i_j(a: u32, b: u32, c: u32, p: u32, q: u32) -> Result<ImageSets> {
    require_triangle(a, b, p)?;
    require_triangle(b, c, q)?;
    let (f, g) = products(a, b, c, p, q)?;
    let mut prods = Vec::new();
    for fi in &f {
        for gj in &g {
            prods.push(fi.try_mul(gj)?);
        }
    }
    let i = hom_span_decomposition(&prods, a, c)?.into_keys().collect();
    let j = if p == q {
        let mut anti = Vec::new();
        for s in 0..f.len() {
            for t in s + 1..f.len() {
                anti.push(f[s].try_mul(&g[t])?.try_sub(&f[t].try_mul(&g[s])?)?);
            }
        }
        Some(hom_span_decomposition(&anti, a, c)?.into_keys().collect())
    } else {
        None
    };
    Ok(ImageSets { i, j })
}

/// Whether every antisymmetrized product `f(v_s) g(v_t) - f(v_t) g(v_s)`
/// vanishes, i.e. `J = 0`.
pub fn j_vanishes_by_span(a: u32, b: u32, c: u32, m: u32) -> Result<bool> {
    require_triangle(a, b, m)?;
    require_triangle(b, c, m)?;
    let (f, g) = products(a, b, c, m, m)?;
    for s in 0..f.len() {
        for t in s + 1..f.len() {
            if f[s].try_mul(&g[t])? != f[t].try_mul(&g[s])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn require_four(a: u32, b: u32, c: u32, p: u32, q: u32, k: u32) -> Result<()> {
    require_triangle(a, b, p)?;
    require_triangle(b, c, q)?;
    require_triangle(p, q, k)?;
    require_triangle(a, c, k)
}

/// The scalar `λ` with `φ(e_k) = λ ι_k^{a,c}(e_k)`, where
/// `φ = μ ∘ (ι_p^{a,b} ⊗ ι_q^{b,c}) ∘ ι_k^{p,q}` and `μ` contracts the two
/// middle factors through the duality `F^r e_b ⊗ F^t e_b -> (-1)^r δ_{r+t,b}`.
pub fn lambda_phi(a: u32, b: u32, c: u32, p: u32, q: u32, k: u32) -> Result<Rational> {
    require_four(a, b, c, p, q, k)?;
    let top = iota(k, p, q)?;
    let left = iota_images(p, a, b)?;
    let right = iota_images(q, b, c)?;
    // Group the right images by their first (V(b)) index for the contraction.
    let right_by_t: Vec<HashMap<usize, Vec<(usize, &Rational)>>> = right
        .iter()
        .map(|img| {
            let mut m: HashMap<usize, Vec<(usize, &Rational)>> = HashMap::new();
            for (t, l, x) in img.support() {
                m.entry(t).or_default().push((l, x));
            }
            m
        })
        .collect();
    let cols = c as usize + 1;
    let mut out = vec![Rational::zero(); (a as usize + 1) * cols];
    for (r, s, c0) in top.support() {
        for (i, rp, x) in left[r].support() {
            let Some(matches) = right_by_t[s].get(&(b as usize - rp)) else {
                continue;
            };
            let w = c0 * x * int(sign(rp as i64));
            for &(l, y) in matches {
                out[i * cols + l] += &w * y;
            }
        }
    }
    let target = iota(k, a, c)?;
    let (pos, t0) = target
        .as_slice()
        .iter()
        .enumerate()
        .find(|(_, x)| !x.is_zero())
        .expect("iota is nonzero");
    let lambda = &out[pos] / t0;
    if out.iter().zip(target.as_slice()).any(|(x, t)| *x != &lambda * t) {
        return Err(Error::Parameter(format!(
            "composite is not proportional to iota at ({a},{b},{c},{p},{q},{k})"
        )));
    }
    Ok(lambda)
}

/// The constant `C` with `λ = C {q k p; a b c}` (twice-values):
/// `(-1)^{x+b+k} (p+q+k+2)(a+b+p+2)(b+c+q+2) Δ(a,b,p) Δ(p,q,k) Δ(b,c,q)
/// / (4 (a+c+k+2) Δ(a,c,k))` with `x = (a+c-k)/2`.
pub fn c_factor(a: u32, b: u32, c: u32, p: u32, q: u32, k: u32) -> Result<SqrtRational> {
    require_four(a, b, c, p, q, k)?;
    let x = (a + c - k) / 2;
    let s = sign((x + b + k) as i64);
    let rational = Rational::new(
        ((p + q + k + 2) as i64 * (a + b + p + 2) as i64 * (b + c + q + 2) as i64 * s).into(),
        (4 * (a + c + k + 2) as i64).into(),
    );
    let ratio = delta_squared(a, b, p) * delta_squared(p, q, k) * delta_squared(b, c, q) / delta_squared(a, c, k);
    Ok(SqrtRational::sqrt(&ratio)?.scale(&rational))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaReport {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub p: u32,
    pub q: u32,
    pub k: u32,
    pub lambda: Rational,
    pub c_factor: SqrtRational,
    pub sixj: SqrtRational,
    pub product: SqrtRational,
    pub agrees: bool,
}

/// Compares `λ` from the tensor expansion against `C * 6j`.
pub fn verify_scalar_theorem(a: u32, b: u32, c: u32, p: u32, q: u32, k: u32) -> Result<LambdaReport> {
    let lambda = lambda_phi(a, b, c, p, q, k)?;
    let cf = c_factor(a, b, c, p, q, k)?;
    let w = sixj(&SixJInput([q, k, p, a, b, c]))?;
    let product = cf.mul(&w);
    let agrees = product.to_rational().as_ref() == Some(&lambda);
    Ok(LambdaReport {
        a,
        b,
        c,
        p,
        q,
        k,
        lambda,
        c_factor: cf,
        sixj: w,
        product,
        agrees,
    })
}

/// Tuples `(a,b,c,p,q,k)` up to `max` satisfying all four triangles, in
/// lexicographic order.
pub fn scalar_tuples(max: u32) -> Vec<[u32; 6]> {
    let mut out = Vec::new();
    for a in 0..=max {
        for b in 0..=max {
            for c in 0..=max {
                for p in 0..=max {
                    if !triangle(a, b, p) {
                        continue;
                    }
                    for q in 0..=max {
                        if !triangle(b, c, q) {
                            continue;
                        }
                        for k in 0..=max {
                            if triangle(p, q, k) && triangle(a, c, k) {
                                out.push([a, b, c, p, q, k]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn scalar_sweep(max: u32) -> Result<Vec<LambdaReport>> {
    scalar_tuples(max)
        .par_iter()
        .map(|&[a, b, c, p, q, k]| verify_scalar_theorem(a, b, c, p, q, k))
        .collect()
}

/// Triple tensor vector `(i, j, l) -> coefficient`, flattened.
fn triple_index(a: u32, b: u32, c: u32) -> impl Fn(usize, usize, usize) -> usize {
    let (nb, nc) = (b as usize + 1, c as usize + 1);
    let _ = a;
    move |i, j, l| (i * nb + j) * nc + l
}

/// Expands `(ι_p^{a,b} ⊗ 1) ι_k^{p,c}(e_k)` in the vectors
/// `(1 ⊗ ι_q^{b,c}) ι_k^{a,q}(e_k)` and checks the coefficients against
/// the 6j transition formula, for every admissible `p`.
pub fn verify_recoupling(a: u32, b: u32, c: u32, k: u32) -> Result<bool> {
    let ps: Vec<u32> = (0..=a + b)
        .filter(|&p| triangle(a, b, p) && triangle(p, c, k))
        .collect();
    let qs: Vec<u32> = (0..=b + c)
        .filter(|&q| triangle(b, c, q) && triangle(a, q, k))
        .collect();
    if ps.is_empty() {
        return Err(Error::Parameter(format!(
            "V({k}) does not occur in V({a})⊗V({b})⊗V({c})"
        )));
    }
    let idx = triple_index(a, b, c);
    let n = (a as usize + 1) * (b as usize + 1) * (c as usize + 1);
    let left_vec = |p: u32| -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); n];
        let imgs = iota_images(p, a, b)?;
        for (r, s, x) in iota(k, p, c)?.support() {
            for (i, j, y) in imgs[r].support() {
                v[idx(i, j, s)] += x * y;
            }
        }
        Ok(v)
    };
    let right_vec = |q: u32| -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); n];
        let imgs = iota_images(q, b, c)?;
        for (r, s, x) in iota(k, a, q)?.support() {
            for (j, l, y) in imgs[s].support() {
                v[idx(r, j, l)] += x * y;
            }
        }
        Ok(v)
    };
    let rights: Vec<Vec<Rational>> = qs.iter().map(|&q| right_vec(q)).collect::<Result<_>>()?;
    let two = |x: u32| x as i64;
    for &p in &ps {
        let l = left_vec(p)?;
        // Rows of the augmented system [R_q ... | L].
        let rows: Vec<Vec<Rational>> = (0..n)
            .filter(|&i| !l[i].is_zero() || rights.iter().any(|r| !r[i].is_zero()))
            .map(|i| {
                rights
                    .iter()
                    .map(|r| r[i].clone())
                    .chain(std::iter::once(l[i].clone()))
                    .collect()
            })
            .collect();
        let (red, pivots) = rref(&rows, qs.len() + 1);
        if pivots.len() != qs.len() || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Ok(false);
        }
        for (t, &q) in qs.iter().enumerate() {
            let x = &red[t][qs.len()];
            let lhs_sign = sign((two(a) - two(b) - two(c) + two(k)) / 2);
            let lhs = SqrtRational::from_rational(Rational::new(
                lhs_sign.into(),
                (((a + b + p) / 2 + 1) as i64 * ((p + c + k) / 2 + 1) as i64).into(),
            ))
            .div(&delta(a, b, p).mul(&delta(p, c, k)))
            .expect("triangles hold");
            let rhs = SqrtRational::from_rational(Rational::new(
                (sign(q as i64) * (q as i64 + 1)).into(),
                (((b + c + q) / 2 + 1) as i64 * ((a + q + k) / 2 + 1) as i64).into(),
            ))
            .div(&delta(b, c, q).mul(&delta(a, q, k)))
            .expect("triangles hold");
            let w = sixj(&SixJInput([a, b, p, c, k, q]))?;
            let expected = rhs.mul(&w).div(&lhs).expect("nonzero");
            if SqrtRational::from_rational(x.clone()) != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `sum_{r=0}^{z} C(x+r, r) C(y-r, z-r) = C(x+y+1, z)`.
pub fn binomial_identity_check(x: u32, y: u32, z: u32) -> Result<bool> {
    if z > y {
        return Err(Error::Parameter("need y >= z".into()));
    }
    let (x, y, z) = (x as i64, y as i64, z as i64);
    let lhs: num_bigint::BigInt = (0..=z).map(|r| binomial(x + r, r) * binomial(y - r, z - r)).sum();
    Ok(lhs == binomial(x + y + 1, z))
}

/// One row of the length-three comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyRow {
    pub m: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    /// Closed-form condition.
    pub closed_form: bool,
    /// `J = 0` read off from the 6j-symbols.
    pub j_empty_sixj: bool,
    /// `J = 0` from the antisymmetrized products.
    pub j_empty_span: bool,
    /// The superdiagonal module exists.
    pub builds: bool,
}

impl ClassifyRow {
    pub fn agree(&self) -> bool {
        self.closed_form == self.j_empty_sixj
            && self.j_empty_sixj == self.j_empty_span
            && self.j_empty_span == self.builds
    }
}

pub fn classify_row(m: u32, a: u32, b: u32, c: u32) -> Result<ClassifyRow> {
    let j = compute_I_J(a, b, c, m, m)?.j.expect("p = q");
    Ok(ClassifyRow {
        m,
        a,
        b,
        c,
        closed_form: length3_condition4(a, b, c, m)?,
        j_empty_sixj: j.is_empty(),
        j_empty_span: j_vanishes_by_span(a, b, c, m)?,
        builds: is_admissible_constructive(&[a, b, c], m)?,
    })
}

pub fn classify_sweep(max_m: u32, max_weight: u32) -> Result<Vec<ClassifyRow>> {
    let mut params = Vec::new();
    for m in 1..=max_m {
        for a in 0..=max_weight {
            for b in 0..=max_weight {
                if !triangle(a, b, m) {
                    continue;
                }
                for c in 0..=max_weight {
                    if triangle(b, c, m) {
                        params.push((m, a, b, c));
                    }
                }
            }
        }
    }
    params
        .par_iter()
        .map(|&(m, a, b, c)| classify_row(m, a, b, c))
        .collect()
}
