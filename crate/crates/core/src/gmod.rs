//! Modules over `g = sl(2) ⋉ V(m)`: relation checks, socle series, duals and
//! the JSON interchange format.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, kernel, parse_rational, EchelonBasis, QMatrix, Rational};
use crate::sl2::{decompose, integer_weights, Convention, Decomposition, Sl2Rep};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GRep {
    m: u32,
    h: QMatrix,
    e: QMatrix,
    f: QMatrix,
    v: Vec<QMatrix>,
    convention: Convention,
}

impl GRep {
    pub fn new(m: u32, h: QMatrix, e: QMatrix, f: QMatrix, v: Vec<QMatrix>, convention: Convention) -> Result<Self> {
        let n = h.rows();
        if v.len() != m as usize + 1 {
            return Err(Error::Dimension(format!(
                "expected {} radical matrices, got {}",
                m + 1,
                v.len()
            )));
        }
        if [&h, &e, &f]
            .into_iter()
            .chain(&v)
            .any(|x| x.rows() != n || x.cols() != n)
        {
            return Err(Error::Dimension("all matrices must be square of equal size".into()));
        }
        Ok(Self {
            m,
            h,
            e,
            f,
            v,
            convention,
        })
    }

    /// An sl(2)-module with the radical acting by zero.
    pub fn from_sl2(m: u32, rep: &Sl2Rep) -> Self {
        let n = rep.dim();
        Self {
            m,
            h: rep.h().clone(),
            e: rep.e().clone(),
            f: rep.f().clone(),
            v: vec![QMatrix::zeros(n, n); m as usize + 1],
            convention: rep.convention(),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
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

    pub fn v(&self) -> &[QMatrix] {
        &self.v
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn generators(&self) -> impl Iterator<Item = &QMatrix> {
        [&self.h, &self.e, &self.f].into_iter().chain(&self.v)
    }

    pub fn map_generators(&self, f: impl Fn(&QMatrix) -> QMatrix) -> Self {
        Self {
            m: self.m,
            h: f(&self.h),
            e: f(&self.e),
            f: f(&self.f),
            v: self.v.iter().map(&f).collect(),
            convention: self.convention,
        }
    }

    /// Replaces one radical matrix; used to build perturbed candidates.
    pub fn with_v(mut self, i: usize, x: QMatrix) -> Result<Self> {
        if i >= self.v.len() || x.rows() != self.dim() || x.cols() != self.dim() {
            return Err(Error::Dimension("replacement radical matrix".into()));
        }
        self.v[i] = x;
        Ok(self)
    }

    pub fn sl2_part(&self) -> Sl2Rep {
        Sl2Rep::new(self.h.clone(), self.e.clone(), self.f.clone(), self.convention).expect("shapes checked")
    }
}

/// A bracket relation of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    HDiagonal,
    HE,
    HF,
    EF,
    Radical(usize, usize),
    HV(usize),
    EV(usize),
    FV(usize),
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::HDiagonal => write!(f, "H diagonal with integer entries"),
            Relation::HE => write!(f, "[h,e] = 2e"),
            Relation::HF => write!(f, "[h,f] = -2f"),
            Relation::EF => write!(f, "[e,f] = h"),
            Relation::Radical(i, j) => write!(f, "[v_{i},v_{j}] = 0"),
            Relation::HV(i) => write!(f, "[h,v_{i}] = (m-2*{i}) v_{i}"),
            Relation::EV(i) => write!(f, "[e,v_{i}] = (m-{i}+1) v_{}", *i as i64 - 1),
            Relation::FV(i) => write!(f, "[f,v_{i}] = ({i}+1) v_{}", i + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub violated: Option<Relation>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.violated.is_none()
    }
}

/// Checks every defining relation of `g` (all radical pairs, not just
/// `(v_0, v_j)`), stopping at the first failure.
pub fn check_rep(rep: &GRep) -> RelationReport {
    let fail = |r| RelationReport { violated: Some(r) };
    let br = |x: &QMatrix, y: &QMatrix| x.commutator(y).expect("shapes checked");
    let (h, e, f) = (&rep.h, &rep.e, &rep.f);
    if br(h, e) != e.scale(&int(2)) {
        return fail(Relation::HE);
    }
    if br(h, f) != f.scale(&int(-2)) {
        return fail(Relation::HF);
    }
    if br(e, f) != *h {
        return fail(Relation::EF);
    }
    let m = rep.m as i64;
    let n = rep.dim();
    let zero = QMatrix::zeros(n, n);
    for (i, vi) in rep.v.iter().enumerate() {
        let ii = i as i64;
        if br(h, vi) != vi.scale(&int(m - 2 * ii)) {
            return fail(Relation::HV(i));
        }
        let down = if i == 0 {
            zero.clone()
        } else {
            rep.v[i - 1].scale(&int(m - ii + 1))
        };
        if br(e, vi) != down {
            return fail(Relation::EV(i));
        }
        let up = rep.v.get(i + 1).map_or(zero.clone(), |x| x.scale(&int(ii + 1)));
        if br(f, vi) != up {
            return fail(Relation::FV(i));
        }
    }
    for i in 0..rep.v.len() {
        for j in i + 1..rep.v.len() {
            if !br(&rep.v[i], &rep.v[j]).is_zero() {
                return fail(Relation::Radical(i, j));
            }
        }
    }
    if integer_weights(h).is_err() {
        return fail(Relation::HDiagonal);
    }
    RelationReport { violated: None }
}

fn require_valid(rep: &GRep) -> Result<()> {
    match check_rep(rep).violated {
        None => Ok(()),
        Some(Relation::HDiagonal) => Err(Error::NonDiagonalH),
        Some(r) => Err(Error::Parameter(format!("not a representation: {r} fails"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocleStep {
    /// Basis of `soc^i` in the module's coordinates.
    pub basis: Vec<Vec<Rational>>,
    /// `soc^i / soc^{i-1}` as an sl(2)-module.
    pub factor: Decomposition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocleSeries {
    pub steps: Vec<SocleStep>,
}

impl SocleSeries {
    pub fn factors(&self) -> Vec<Decomposition> {
        self.steps.iter().map(|s| s.factor.clone()).collect()
    }

    /// The highest weight of each factor, when every factor is irreducible.
    pub fn irreducible_sequence(&self) -> Option<Vec<u32>> {
        self.steps
            .iter()
            .map(|s| match s.factor.iter().collect::<Vec<_>>().as_slice() {
                [(&k, &1)] => Some(k),
                _ => None,
            })
            .collect()
    }
}

/// Coordinates grouped by `H`-weight.
struct WeightSpaces {
    of: BTreeMap<i64, Vec<usize>>,
}

impl WeightSpaces {
    fn new(weights: &[i64]) -> Self {
        let mut of: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &w) in weights.iter().enumerate() {
            of.entry(w).or_default().push(i);
        }
        Self { of }
    }

    fn block(&self, x: &QMatrix, to: i64, from: i64) -> Option<Vec<Vec<Rational>>> {
        let rows = self.of.get(&to)?;
        let cols = &self.of[&from];
        Some(
            rows.iter()
                .map(|&r| cols.iter().map(|&c| x.get(r, c).clone()).collect())
                .collect(),
        )
    }
}

fn apply(block: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    block
        .iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

/// Socle series. Since `g` is perfect for `m >= 1`, `soc^{i+1}` is the set of
/// vectors sent into `soc^i` by every `v_j`. Each layer is H-graded, so the
/// computation runs one weight space at a time.
pub fn socle_series(rep: &GRep) -> Result<SocleSeries> {
    require_valid(rep)?;
    let weights = integer_weights(&rep.h)?;
    let spaces = WeightSpaces::new(&weights);
    let m = rep.m as i64;
    let mut current: BTreeMap<i64, EchelonBasis> = spaces
        .of
        .iter()
        .map(|(&w, idx)| (w, EchelonBasis::new(idx.len())))
        .collect();
    let mut steps = Vec::new();
    let mut total = 0;
    while total < rep.dim() {
        let mut next: BTreeMap<i64, EchelonBasis> = BTreeMap::new();
        for (&w, idx) in &spaces.of {
            let mut rows: Vec<Vec<Rational>> = Vec::new();
            for (j, vj) in rep.v.iter().enumerate() {
                let to = w + m - 2 * j as i64;
                let Some(block) = spaces.block(vj, to, w) else {
                    continue;
                };
                let q = quotient_map(&current[&to]);
                for qrow in &q {
                    let row: Vec<Rational> = (0..idx.len())
                        .map(|c| {
                            qrow.iter()
                                .zip(&block)
                                .filter(|(a, b)| !a.is_zero() && !b[c].is_zero())
                                .fold(Rational::zero(), |acc, (a, b)| acc + a * &b[c])
                        })
                        .collect();
                    rows.push(row);
                }
            }
            let mut basis = current[&w].clone();
            for k in kernel(&rows, idx.len()) {
                basis.insert(&k);
            }
            next.insert(w, basis);
        }
        let new_total: usize = next.values().map(EchelonBasis::len).sum();
        if new_total == total {
            return Err(Error::Parameter("radical does not act nilpotently".into()));
        }
        let factor = layer_factor(rep, &spaces, &current, &next)?;
        steps.push(SocleStep {
            basis: global_basis(&spaces, &next, rep.dim()),
            factor,
        });
        total = new_total;
        current = next;
    }
    Ok(SocleSeries { steps })
}

/// Rows of the projection `Q^n -> Q^n / span(basis)` onto the non-pivot
/// coordinates.
fn quotient_map(basis: &EchelonBasis) -> Vec<Vec<Rational>> {
    let n = basis.ambient_dim();
    (0..n)
        .map(|i| {
            let mut e = vec![Rational::zero(); n];
            e[i] = int(1);
            basis.reduce(&e).1
        })
        .fold(vec![Vec::with_capacity(n); n], |mut acc, col| {
            for (r, x) in col.into_iter().enumerate() {
                acc[r].push(x);
            }
            acc
        })
        .into_iter()
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect()
}

fn global_basis(spaces: &WeightSpaces, layer: &BTreeMap<i64, EchelonBasis>, n: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for (w, b) in layer.iter().rev() {
        let idx = &spaces.of[w];
        for row in b.rows() {
            let mut v = vec![Rational::zero(); n];
            for (x, &i) in row.iter().zip(idx) {
                v[i] = x.clone();
            }
            out.push(v);
        }
    }
    out
}

/// `next / current` as an sl(2)-module, using complements chosen inside each
/// weight space so that `H` stays diagonal.
fn layer_factor(
    rep: &GRep,
    spaces: &WeightSpaces,
    current: &BTreeMap<i64, EchelonBasis>,
    next: &BTreeMap<i64, EchelonBasis>,
) -> Result<Decomposition> {
    // For each weight: the complement vectors and an extended basis
    // (current rows first, then the complement) to read coordinates.
    let mut comp: BTreeMap<i64, (Vec<Vec<Rational>>, EchelonBasis, usize)> = BTreeMap::new();
    for (&w, nb) in next {
        let mut ext = current[&w].clone();
        let base = ext.len();
        let mut c = Vec::new();
        for row in nb.rows() {
            if ext.insert(row) {
                c.push(row.clone());
            }
        }
        if !c.is_empty() {
            comp.insert(w, (c, ext, base));
        }
    }
    let order: Vec<(i64, usize)> = comp
        .iter()
        .rev()
        .flat_map(|(&w, (c, _, _))| (0..c.len()).map(move |k| (w, k)))
        .collect();
    let pos: BTreeMap<(i64, usize), usize> = order.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let d = order.len();
    let mut h = QMatrix::zeros(d, d);
    let mut e = QMatrix::zeros(d, d);
    let mut f = QMatrix::zeros(d, d);
    for (col, &(w, k)) in order.iter().enumerate() {
        h.set(col, col, int(w));
        let u = &comp[&w].0[k];
        for (x, target, shift) in [(&rep.e, &mut e, 2), (&rep.f, &mut f, -2)] {
            let to = w + shift;
            let Some(block) = spaces.block(x, to, w) else {
                continue;
            };
            let y = apply(&block, u);
            let Some((_, ext, base)) = comp.get(&to) else {
                if !current[&to].contains(&y) {
                    return Err(Error::Parameter("layer is not sl(2)-stable".into()));
                }
                continue;
            };
            let coords = ext
                .coordinates(&y)
                .ok_or_else(|| Error::Parameter("layer is not sl(2)-stable".into()))?;
            for (l, c) in coords.into_iter().enumerate().skip(*base) {
                if !c.is_zero() {
                    target.set(pos[&(to, l - base)], col, c);
                }
            }
        }
    }
    decompose(&Sl2Rep::new(h, e, f, rep.convention)?)
}

/// Every socle factor is an irreducible sl(2)-module.
pub fn is_uniserial(rep: &GRep) -> Result<bool> {
    Ok(socle_series(rep)?.irreducible_sequence().is_some())
}

/// The dual module: every generator `X` becomes `-X^T`.
pub fn dual_rep(rep: &GRep) -> GRep {
    rep.map_generators(|x| -&x.transpose())
}

/// Smallest submodule containing `vectors`, as an echelon basis.
pub fn generated_submodule(rep: &GRep, vectors: &[Vec<Rational>]) -> Result<EchelonBasis> {
    closure(&rep.generators().collect::<Vec<_>>(), vectors, rep.dim())
}

/// Smallest sl(2)-submodule containing `vectors`.
pub fn generated_sl2_submodule(rep: &GRep, vectors: &[Vec<Rational>]) -> Result<EchelonBasis> {
    closure(&[&rep.h, &rep.e, &rep.f], vectors, rep.dim())
}

fn closure(gens: &[&QMatrix], vectors: &[Vec<Rational>], n: usize) -> Result<EchelonBasis> {
    let mut basis = EchelonBasis::new(n);
    let mut frontier = Vec::new();
    for v in vectors {
        if v.len() != n {
            return Err(Error::Dimension("vector length".into()));
        }
        if basis.insert(v) {
            frontier.push(v.clone());
        }
    }
    while let Some(u) = frontier.pop() {
        for x in gens {
            let y = x.mul_vec(&u)?;
            if basis.insert(&y) {
                frontier.push(y);
            }
        }
    }
    Ok(basis)
}

/// The action on an invariant subspace, in the coordinates of `basis`.
pub fn restrict(rep: &GRep, basis: &EchelonBasis) -> Result<GRep> {
    let d = basis.len();
    let act = |x: &QMatrix| -> Result<QMatrix> {
        let mut out = QMatrix::zeros(d, d);
        for (col, b) in basis.rows().iter().enumerate() {
            let y = x.mul_vec(b)?;
            let c = basis
                .coordinates(&y)
                .ok_or_else(|| Error::Parameter("subspace is not invariant".into()))?;
            for (row, val) in c.into_iter().enumerate() {
                out.set(row, col, val);
            }
        }
        Ok(out)
    };
    GRep::new(
        rep.m,
        act(&rep.h)?,
        act(&rep.e)?,
        act(&rep.f)?,
        rep.v.iter().map(act).collect::<Result<_>>()?,
        rep.convention,
    )
}

/// Sizes of consecutive irreducible blocks when `H` reads as a run of
/// weight strings `t, t-2, ..., -t` (or the reverse).
pub fn block_sizes(rep: &GRep) -> Option<Vec<usize>> {
    let w = integer_weights(&rep.h).ok()?;
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let size = w[i].unsigned_abs() as usize + 1;
        let step = if w[i] >= 0 { -2 } else { 2 };
        if i + size > w.len() || (0..size).any(|k| w[i + k] != w[i] + step * k as i64) {
            return None;
        }
        out.push(size);
        i += size;
    }
    Some(out)
}

#[derive(Serialize, Deserialize)]
struct GRepJson {
    m: u32,
    dim: usize,
    h: Vec<Vec<String>>,
    e: Vec<Vec<String>>,
    f: Vec<Vec<String>>,
    v: Vec<Vec<Vec<String>>>,
    convention: Convention,
}

fn to_strings(x: &QMatrix) -> Vec<Vec<String>> {
    x.to_rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

fn from_strings(x: &[Vec<String>], n: usize) -> Result<QMatrix> {
    if x.len() != n {
        return Err(Error::Dimension(format!("expected {n} rows")));
    }
    let rows = x
        .iter()
        .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let q = QMatrix::from_rows(rows)?;
    if n > 0 && q.cols() != n {
        return Err(Error::Dimension(format!("expected {n} columns")));
    }
    Ok(if n == 0 { QMatrix::zeros(0, 0) } else { q })
}

impl GRep {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GRepJson {
            m: self.m,
            dim: self.dim(),
            h: to_strings(&self.h),
            e: to_strings(&self.e),
            f: to_strings(&self.f),
            v: self.v.iter().map(to_strings).collect(),
            convention: self.convention,
        })
        .expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: GRepJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = j.dim;
        GRep::new(
            j.m,
            from_strings(&j.h, n)?,
            from_strings(&j.e, n)?,
            from_strings(&j.f, n)?,
            j.v.iter().map(|x| from_strings(x, n)).collect::<Result<_>>()?,
            j.convention,
        )
    }
}
