//! Finite-dimensional sl(2) modules: irreducibles, tensor products, the
//! highest-weight embeddings `V(k) -> V(a) ⊗ V(b)` and the hom-space version
//! used to build modules over sl(2) ⋉ V(m).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{big, binomial, factorial, int, kernel, sign, QMatrix, Rational};

/// Basis convention for `V(k)`. `PlainF` uses `F^r e`, `DividedPower` uses
/// `F^r e / r!`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    PlainF,
    DividedPower,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::PlainF => write!(f, "PlainF"),
            Convention::DividedPower => write!(f, "DividedPower"),
        }
    }
}

/// Multiplicity of each highest weight.
pub type Decomposition = BTreeMap<u32, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Rep {
    h: QMatrix,
    e: QMatrix,
    f: QMatrix,
    convention: Convention,
}

impl Sl2Rep {
    pub fn new(h: QMatrix, e: QMatrix, f: QMatrix, convention: Convention) -> Result<Self> {
        let n = h.rows();
        for m in [&h, &e, &f] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension("sl2 matrices must be square of equal size".into()));
            }
        }
        Ok(Self { h, e, f, convention })
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    pub fn h(&self) -> &QMatrix {
        &self.h
    }

    pub fn e(&self) -> &QMatrix {
        &self.e
    }

    pub fn f(&self) -> &QMatrix {
        &self.f
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn satisfies_relations(&self) -> bool {
        let two = int(2);
        self.h.commutator(&self.e).ok() == Some(self.e.scale(&two))
            && self.h.commutator(&self.f).ok() == Some(self.f.scale(&-two))
            && self.e.commutator(&self.f).ok().as_ref() == Some(&self.h)
    }
}

/// The irreducible module of highest weight `k`.
pub fn irrep(k: u32, convention: Convention) -> Sl2Rep {
    let n = k as usize + 1;
    let k = k as i64;
    let h = QMatrix::diagonal(&(0..n as i64).map(|r| int(k - 2 * r)).collect::<Vec<_>>());
    let mut e = QMatrix::zeros(n, n);
    let mut f = QMatrix::zeros(n, n);
    for r in 1..n {
        let ri = r as i64;
        match convention {
            Convention::PlainF => {
                e.set(r - 1, r, int(ri * (k + 1 - ri)));
                f.set(r, r - 1, Rational::one());
            }
            Convention::DividedPower => {
                e.set(r - 1, r, int(k - ri + 1));
                f.set(r, r - 1, int(ri));
            }
        }
    }
    Sl2Rep { h, e, f, convention }
}

/// `diag(0!, 1!, ..., k!)`: coordinates change as `x_dp = D x_plain`.
pub fn divided_power_change(k: u32) -> QMatrix {
    QMatrix::diagonal(&(0..=k as u64).map(|r| big(factorial(r))).collect::<Vec<_>>())
}

fn inverse_diagonal(d: &QMatrix) -> QMatrix {
    QMatrix::diagonal(&d.diag().iter().map(|x| x.recip()).collect::<Vec<_>>())
}

/// Tensor product in the lexicographic basis `i * dim_b + j`.
pub fn tensor(a: &Sl2Rep, b: &Sl2Rep) -> Result<Sl2Rep> {
    if a.convention != b.convention {
        return Err(Error::Convention {
            expected: a.convention.to_string(),
            found: b.convention.to_string(),
        });
    }
    let ia = QMatrix::identity(a.dim());
    let ib = QMatrix::identity(b.dim());
    let act = |x: &QMatrix, y: &QMatrix| &x.kronecker(&ib) + &ia.kronecker(y);
    Ok(Sl2Rep {
        h: act(&a.h, &b.h),
        e: act(&a.e, &b.e),
        f: act(&a.f, &b.f),
        convention: a.convention,
    })
}

/// Highest weights with multiplicity. Requires `H` diagonal with integer
/// entries; the multiplicity of `k` is `dim ker E` on the weight-`k` space.
pub fn decompose(rep: &Sl2Rep) -> Result<Decomposition> {
    let weights = integer_weights(&rep.h)?;
    let mut out = Decomposition::new();
    let distinct: BTreeSet<i64> = weights.iter().copied().filter(|&w| w >= 0).collect();
    for w in distinct {
        let cols: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] == w).collect();
        let rows: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] == w + 2).collect();
        let restricted: Vec<Vec<Rational>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| rep.e.get(r, c).clone()).collect())
            .collect();
        let mult = kernel(&restricted, cols.len()).len();
        if mult > 0 {
            out.insert(w as u32, mult);
        }
    }
    Ok(out)
}

pub(crate) fn integer_weights(h: &QMatrix) -> Result<Vec<i64>> {
    if !h.is_diagonal() {
        return Err(Error::NonDiagonalH);
    }
    h.diag()
        .iter()
        .map(|x| {
            if x.is_integer() {
                i64::try_from(x.to_integer()).map_err(|_| Error::NonDiagonalH)
            } else {
                Err(Error::NonDiagonalH)
            }
        })
        .collect()
}

/// Vector of `V(a) ⊗ V(b)` in the `PlainF` basis `F^r e_a ⊗ F^s e_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVector {
    a: u32,
    b: u32,
    coeffs: Vec<Rational>,
}

impl TensorVector {
    pub fn zero(a: u32, b: u32) -> Self {
        Self {
            a,
            b,
            coeffs: vec![Rational::zero(); (a as usize + 1) * (b as usize + 1)],
        }
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    fn idx(&self, r: usize, s: usize) -> usize {
        r * (self.b as usize + 1) + s
    }

    pub fn get(&self, r: usize, s: usize) -> &Rational {
        &self.coeffs[self.idx(r, s)]
    }

    pub fn set(&mut self, r: usize, s: usize, x: Rational) {
        let i = self.idx(r, s);
        self.coeffs[i] = x;
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero entries as `(r, s, coefficient)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        let w = self.b as usize + 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (i / w, i % w, c))
    }

    /// `F` acting by the Leibniz rule.
    pub fn apply_f(&self) -> Self {
        let mut out = Self::zero(self.a, self.b);
        for (r, s, c) in self.support() {
            if r < self.a as usize {
                let i = out.idx(r + 1, s);
                out.coeffs[i] += c;
            }
            if s < self.b as usize {
                let i = out.idx(r, s + 1);
                out.coeffs[i] += c;
            }
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            a: self.a,
            b: self.b,
            coeffs: self.coeffs.iter().map(|x| x * q).collect(),
        }
    }
}

pub fn triangle(a: u32, b: u32, c: u32) -> bool {
    (a + b + c) % 2 == 0 && a.abs_diff(b) <= c && c <= a + b
}

fn require_triangle(a: u32, b: u32, c: u32) -> Result<()> {
    if triangle(a, b, c) {
        Ok(())
    } else {
        Err(Error::Triangle(a, b, c))
    }
}

/// Image of the highest-weight vector under the embedding `V(k) -> V(a) ⊗ V(b)`:
/// `sum_r (-1)^r C(x,r) / C(x+k, a-r) F^r e_a ⊗ F^{x-r} e_b` with `x = (a+b-k)/2`.
pub fn iota(k: u32, a: u32, b: u32) -> Result<TensorVector> {
    require_triangle(a, b, k)?;
    let x = (a + b - k) / 2;
    let mut v = TensorVector::zero(a, b);
    for r in 0..=x {
        let num = binomial(x as i64, r as i64) * sign(r as i64);
        let den = binomial((x + k) as i64, (a - r) as i64);
        v.set(r as usize, (x - r) as usize, Rational::new(num, den));
    }
    Ok(v)
}

/// `F^r` applied to [`iota`] for `r = 0..=k`.
pub fn iota_images(k: u32, a: u32, b: u32) -> Result<Vec<TensorVector>> {
    let mut out = vec![iota(k, a, b)?];
    for _ in 0..k {
        let next = out.last().expect("nonempty").apply_f();
        out.push(next);
    }
    Ok(out)
}

/// Matrix of the embedding `V(k) -> V(a) ⊗ V(b)` in the given convention.
pub fn iota_matrix(k: u32, a: u32, b: u32, convention: Convention) -> Result<QMatrix> {
    let images = iota_images(k, a, b)?;
    let rows = (a as usize + 1) * (b as usize + 1);
    let mut m = QMatrix::zeros(rows, k as usize + 1);
    for (col, img) in images.iter().enumerate() {
        for (r, s, c) in img.support() {
            let x = match convention {
                Convention::PlainF => c.clone(),
                Convention::DividedPower => {
                    c * big(factorial(r as u64) * factorial(s as u64)) / big(factorial(col as u64))
                }
            };
            m.set(r * (b as usize + 1) + s, col, x);
        }
    }
    Ok(m)
}

/// `V(k) -> V(k)^*`, `F^r e -> (-1)^r (F^{k-r} e)^*`, in the `PlainF` basis
/// and its dual basis.
pub fn dual_iso(k: u32) -> QMatrix {
    let n = k as usize + 1;
    let mut m = QMatrix::zeros(n, n);
    for r in 0..n {
        m.set(n - 1 - r, r, int(sign(r as i64)));
    }
    m
}

/// Images `f(v_0), ..., f(v_m)` of the sl(2)-equivariant embedding
/// `V(m) -> Hom(V(b), V(a))`, as `(a+1) x (b+1)` matrices.
///
/// Generators are normalized as `v_i = F^i v_0 / i!`, so that
/// `[e, v_i] = (m-i+1) v_{i-1}` and `[f, v_i] = (i+1) v_{i+1}`.
pub fn hom_embedding(m: u32, b: u32, a: u32, convention: Convention) -> Result<Vec<QMatrix>> {
    let images = iota_images(m, a, b)?;
    let (ra, rb) = (a as usize + 1, b as usize + 1);
    let (da, db_inv) = (divided_power_change(a), inverse_diagonal(&divided_power_change(b)));
    images
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let scale = big(factorial(i as u64)).recip();
            let mut f = QMatrix::zeros(ra, rb);
            for (r1, r2, c) in img.support() {
                *f.get_mut(r1, b as usize - r2) += c * &scale * int(sign(r2 as i64));
            }
            Ok(match convention {
                Convention::PlainF => f,
                Convention::DividedPower => &(&da * &f) * &db_inv,
            })
        })
        .collect()
}

/// Highest weights of `Λ² V(m)`: `2m-2, 2m-6, ...`.
pub fn exterior_square_components(m: u32) -> BTreeSet<u32> {
    (0..)
        .map(|t| 2 * m as i64 - 2 - 4 * t)
        .take_while(|&w| w >= 0)
        .map(|w| w as u32)
        .collect()
}

/// `Λ² V(m)` as a module, basis `e_i ∧ e_j` with `i < j` in lexicographic order.
pub fn exterior_square(m: u32, convention: Convention) -> Sl2Rep {
    let v = irrep(m, convention);
    let n = m as usize + 1;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let act = |x: &QMatrix| {
        let mut out = QMatrix::zeros(pairs.len(), pairs.len());
        for (col, &(i, j)) in pairs.iter().enumerate() {
            // X(e_i ∧ e_j) = X e_i ∧ e_j + e_i ∧ X e_j
            for k in 0..n {
                for (p, q, c) in [(k, j, x.get(k, i)), (i, k, x.get(k, j))] {
                    if c.is_zero() || p == q {
                        continue;
                    }
                    let (row, s) = if p < q {
                        (index[&(p, q)], 1)
                    } else {
                        (index[&(q, p)], -1)
                    };
                    *out.get_mut(row, col) += c * int(s);
                }
            }
        }
        out
    };
    Sl2Rep {
        h: act(&v.h),
        e: act(&v.e),
        f: act(&v.f),
        convention,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormSymmetry {
    Symmetric,
    Skew,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantForm {
    pub matrix: QMatrix,
    pub symmetry: FormSymmetry,
}

/// The invariant bilinear form on `V(m)` in the `PlainF` basis: the
/// coefficient matrix of the invariant tensor `iota(0, m, m)`.
/// Symmetric for even `m`, skew for odd `m`.
pub fn invariant_form(m: u32) -> InvariantForm {
    let t = iota(0, m, m).expect("(m, m, 0) is a triangle");
    let n = m as usize + 1;
    let mut matrix = QMatrix::zeros(n, n);
    for (r, s, c) in t.support() {
        matrix.set(r, s, c.clone());
    }
    InvariantForm {
        matrix,
        symmetry: if m % 2 == 0 {
            FormSymmetry::Symmetric
        } else {
            FormSymmetry::Skew
        },
    }
}
