use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{format_rational, int, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in entries.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Panics on ragged input; meant for literals.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .expect("ragged integer literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rational) {
        self.data[r * self.cols + c] = x;
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn diag(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| if x.is_zero() { x.clone() } else { x * q })
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let sparse: Vec<Vec<(usize, &Rational)>> = (0..other.rows)
            .map(|k| other.row(k).iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for &(j, b) in &sparse[k] {
                    *out.get_mut(i, j) += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{} columns vs vector of {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(blocks: &[QMatrix]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &QMatrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    /// Flattened row-major entries, for treating matrices as vectors.
    pub fn flatten(&self) -> Vec<Rational> {
        self.data.clone()
    }

    pub fn rank(&self) -> usize {
        rank(&self.to_rows(), self.cols)
    }

    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        kernel(&self.to_rows(), self.cols)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.try_mul(rhs).expect("matrix shapes")
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        self.try_add(rhs).expect("matrix shapes")
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        self.try_sub(rhs).expect("matrix shapes")
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.scale(&-Rational::one())
    }
}

/// Reduced row echelon form of `rows` (each of length `ncols`): leftmost
/// pivot, first nonzero row chosen. Zero rows are dropped. Returns the
/// reduced rows and their pivot columns.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r][c..].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let (head, tail) = m.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().expect("row r exists");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows, one vector per free column.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (red, pivots) = rref(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                if !row[f].is_zero() {
                    v[p] = -row[f].clone();
                }
            }
            v
        })
        .collect()
}

/// Echelon basis of the span of `vectors`.
pub fn span_basis(vectors: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    rref(vectors, dim).0
}

/// Echelon basis of `span(a) ∩ span(b)` inside Q^dim.
pub fn intersect_spans(a: &[Vec<Rational>], b: &[Vec<Rational>], dim: usize) -> Result<Vec<Vec<Rational>>> {
    if a.iter().chain(b).any(|v| v.len() != dim) {
        return Err(Error::Dimension(format!("vectors must have length {dim}")));
    }
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let (s, t) = (a.len(), b.len());
    let rows: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            a.iter()
                .map(|v| v[i].clone())
                .chain(b.iter().map(|v| -v[i].clone()))
                .collect()
        })
        .collect();
    let combos = kernel(&rows, s + t);
    let vecs: Vec<Vec<Rational>> = combos
        .iter()
        .map(|x| {
            let mut v = vec![Rational::zero(); dim];
            for (coef, av) in x[..s].iter().zip(a) {
                if coef.is_zero() {
                    continue;
                }
                for (vi, ai) in v.iter_mut().zip(av) {
                    *vi += coef * ai;
                }
            }
            v
        })
        .collect();
    Ok(span_basis(&vecs, dim))
}

/// Incrementally built basis with distinct pivots. Each stored row has a 1 at
/// its pivot and zeros at the pivots of earlier rows, so sequential
/// reduction both tests membership and reads off coordinates.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Coordinates along the stored rows and the leftover residual.
    pub fn reduce(&self, v: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut r = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if !c.is_zero() {
                for (x, y) in r.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &c * y;
                    }
                }
            }
            coords.push(c);
        }
        (coords, r)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).1.iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` if it lies in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let (c, r) = self.reduce(v);
        r.iter().all(Zero::is_zero).then_some(c)
    }

    /// Adds `v` if it is independent; returns whether it was added.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let (_, mut r) = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}
