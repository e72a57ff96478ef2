//! Builders for the uniserial modules of `sl(2) ⋉ V(m)`, the recognition
//! test for `Z(ℓ, b)` and its dual, and a LaTeX block rendering.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{big, binomial, content, int, sign, QMatrix, Rational};
use crate::gmod::{
    block_sizes, check_rep, dual_rep, generated_sl2_submodule, generated_submodule, restrict, GRep, Relation,
};
use crate::sl2::{hom_embedding, irrep, triangle, Convention};

/// Socle factors `ℓ, ℓ+m, ..., ℓ+bm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZSpec {
    pub ell: u32,
    pub b: u32,
    pub m: u32,
}

impl ZSpec {
    pub fn new(ell: u32, b: u32, m: u32) -> Self {
        Self { ell, b, m }
    }

    pub fn factors(&self) -> Vec<u32> {
        (0..=self.b).map(|j| self.ell + j * self.m).collect()
    }
}

fn require_m(m: u32) -> Result<()> {
    if m == 0 {
        Err(Error::Parameter("m must be positive".into()))
    } else {
        Ok(())
    }
}

/// Block-diagonal sl(2) action on `V(w_1) ⊕ ... ⊕ V(w_n)`, divided powers.
fn diagonal_part(weights: &[u32]) -> (QMatrix, QMatrix, QMatrix, Vec<usize>) {
    let reps: Vec<_> = weights.iter().map(|&w| irrep(w, Convention::DividedPower)).collect();
    let mut offsets = Vec::with_capacity(weights.len() + 1);
    let mut acc = 0;
    for &w in weights {
        offsets.push(acc);
        acc += w as usize + 1;
    }
    offsets.push(acc);
    let diag = |pick: fn(&crate::sl2::Sl2Rep) -> &QMatrix| {
        QMatrix::block_diag(&reps.iter().map(|r| pick(r).clone()).collect::<Vec<_>>())
    };
    (diag(|r| r.h()), diag(|r| r.e()), diag(|r| r.f()), offsets)
}

/// `Z(ℓ, b)` with superdiagonal blocks `(-1)^i C(m,i) W_i(a)`, where
/// `W_i(a) = [0 | I_{a+1} | 0]` has `m-i` zero columns on the left.
pub fn build_z(spec: ZSpec) -> Result<GRep> {
    require_m(spec.m)?;
    let ws = spec.factors();
    let (h, e, f, off) = diagonal_part(&ws);
    let n = *off.last().expect("offsets");
    let m = spec.m as usize;
    let mut v = vec![QMatrix::zeros(n, n); m + 1];
    for (i, vi) in v.iter_mut().enumerate() {
        let c = big(binomial(m as i64, i as i64) * sign(i as i64));
        for (j, &a) in ws.iter().enumerate().take(ws.len() - 1) {
            for r in 0..=a as usize {
                vi.set(off[j] + r, off[j + 1] + r + m - i, c.clone());
            }
        }
    }
    GRep::new(spec.m, h, e, f, v, Convention::DividedPower)
}

pub fn build_z_dual(spec: ZSpec) -> Result<GRep> {
    Ok(dual_rep(&build_z(spec)?))
}

/// Scales a family of blocks to coprime integer entries, with the first
/// nonzero entry of the first nonzero block positive.
pub fn primitive_blocks(blocks: &[QMatrix]) -> Vec<QMatrix> {
    let entries: Vec<&Rational> = blocks.iter().flat_map(|b| b.entries()).collect();
    let Some(c) = content(&entries) else {
        return blocks.to_vec();
    };
    let lead = entries.iter().find(|x| !x.is_zero()).expect("content is nonzero");
    let s = if *lead.numer() < num_bigint::BigInt::zero() {
        -c.recip()
    } else {
        c.recip()
    };
    blocks.iter().map(|b| b.scale(&s)).collect()
}

/// Outcome of assembling a module from a factor sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceOutcome {
    Module(GRep),
    /// `[v_i, v_j]` does not vanish.
    NotAbelian {
        i: usize,
        j: usize,
        commutator: QMatrix,
    },
}

impl SequenceOutcome {
    pub fn module(self) -> Option<GRep> {
        match self {
            SequenceOutcome::Module(r) => Some(r),
            SequenceOutcome::NotAbelian { .. } => None,
        }
    }
}

/// Block-superdiagonal module on `V(seq_1) ⊕ ... ⊕ V(seq_n)`: block `(j, j+1)`
/// carries the primitive integral form of the equivariant map
/// `V(m) -> Hom(V(seq_{j+1}), V(seq_j))`, times `scalars[j]`.
pub fn build_from_sequence(seq: &[u32], m: u32, scalars: &[Rational]) -> Result<SequenceOutcome> {
    if seq.is_empty() {
        return Err(Error::Parameter("empty sequence".into()));
    }
    if scalars.len() + 1 != seq.len() {
        return Err(Error::Parameter(format!("need {} scalars", seq.len() - 1)));
    }
    if scalars.iter().any(Zero::is_zero) {
        return Err(Error::Parameter("scalars must be nonzero".into()));
    }
    for w in seq.windows(2) {
        if !triangle(w[0], w[1], m) {
            return Err(Error::Triangle(w[0], w[1], m));
        }
    }
    let (h, e, f, off) = diagonal_part(seq);
    let n = *off.last().expect("offsets");
    let mut v = vec![QMatrix::zeros(n, n); m as usize + 1];
    for j in 0..seq.len() - 1 {
        let blocks = primitive_blocks(&hom_embedding(m, seq[j + 1], seq[j], Convention::DividedPower)?);
        for (vi, b) in v.iter_mut().zip(&blocks) {
            vi.set_block(off[j], off[j + 1], &b.scale(&scalars[j]));
        }
    }
    let rep = GRep::new(m, h, e, f, v, Convention::DividedPower)?;
    match check_rep(&rep).violated {
        None => Ok(SequenceOutcome::Module(rep)),
        Some(Relation::Radical(i, j)) => {
            let commutator = rep.v()[i].commutator(&rep.v()[j])?;
            Ok(SequenceOutcome::NotAbelian { i, j, commutator })
        }
        Some(r) => Err(Error::Parameter(format!("assembled matrices violate {r}"))),
    }
}

fn ones(n: usize) -> Vec<Rational> {
    vec![Rational::one(); n]
}

/// Conjugates a module with three blocks of sizes `(p, q, q)` by
/// `I + t N`, `N` the identity in block position (2,3), choosing `t` so that
/// the (1,3) block of every radical matrix vanishes. Requires the (1,3)
/// blocks to be one common multiple of the (1,2) blocks.
pub fn clear_corner_block(rep: &GRep, sizes: [usize; 3]) -> Result<GRep> {
    let [p, q, q2] = sizes;
    if q != q2 || p + q + q2 != rep.dim() {
        return Err(Error::Dimension("corner clearing needs block sizes (p, q, q)".into()));
    }
    let mut ratio: Option<Rational> = None;
    for x in rep.v() {
        let b12 = x.block(0, p, p, q);
        let b13 = x.block(0, p + q, p, q);
        for (a, c) in b12.entries().zip(b13.entries()) {
            match (&ratio, a.is_zero()) {
                (None, false) => ratio = Some(c / a),
                (Some(s), _) if *c != s * a => {
                    return Err(Error::Parameter("(1,3) block is not a multiple of (1,2) block".into()))
                }
                _ => {}
            }
        }
    }
    let Some(s) = ratio else {
        return Ok(rep.clone());
    };
    let n = rep.dim();
    let mut pm = QMatrix::identity(n);
    let mut pinv = QMatrix::identity(n);
    for k in 0..q {
        pm.set(p + k, p + q + k, -s.clone());
        pinv.set(p + k, p + q + k, s.clone());
    }
    Ok(rep.map_generators(|x| &(&pinv * x) * &pm))
}

/// The module with socle factors `V(0), V(m), V(c)`; needs `c <= 2m` and
/// `c ≡ 2m (mod 4)`.
pub fn build_exceptional_len3(m: u32, c: u32) -> Result<GRep> {
    require_m(m)?;
    if c > 2 * m || (2 * m - c) % 4 != 0 {
        return Err(Error::Parameter(format!(
            "need c <= 2m and c ≡ 2m mod 4 (m={m}, c={c})"
        )));
    }
    let rep = build_from_sequence(&[0, m, c], m, &ones(2))?
        .module()
        .ok_or_else(|| Error::Parameter("radical is not abelian".into()))?;
    if c == m {
        clear_corner_block(&rep, [1, m as usize + 1, m as usize + 1])
    } else {
        Ok(rep)
    }
}

/// The family with socle factors `V(0), V(m), V(m), V(0)` for `m ≡ 0 mod 4`:
/// the (2,4) block is `z` times the (3,4) block.
pub fn build_z_family(m: u32, z: &Rational) -> Result<GRep> {
    if m == 0 || m % 4 != 0 {
        return Err(Error::Parameter(format!("m must be a positive multiple of 4, got {m}")));
    }
    let base = build_from_sequence(&[0, m, m, 0], m, &ones(3))?
        .module()
        .ok_or_else(|| Error::Parameter("radical is not abelian".into()))?;
    let k = m as usize + 1;
    let (r2, c3, c4) = (1, 1 + k, 1 + 2 * k);
    let v: Vec<QMatrix> = base
        .v()
        .iter()
        .map(|x| {
            let mut y = x.clone();
            y.set_block(r2, c4, &x.block(c3, c4, k, 1).scale(z));
            y
        })
        .collect();
    let rep = GRep::new(
        m,
        base.h().clone(),
        base.e().clone(),
        base.f().clone(),
        v,
        Convention::DividedPower,
    )?;
    match check_rep(&rep).violated {
        None => Ok(rep),
        Some(r) => Err(Error::Parameter(format!("family member violates {r}"))),
    }
}

/// Degree-`b` polynomials on `V(0) ⊕ V(m)` and the submodule generated by
/// `X_2^b`, where `X_2` is the highest weight vector of the `V(m)` summand.
#[derive(Clone, Debug)]
pub struct SymmetricPower {
    pub x: GRep,
    pub v: GRep,
    /// Exponent vectors indexing the basis of `x`.
    pub monomials: Vec<Vec<u32>>,
    /// `X_2^b` in the coordinates of `x` and of `v`.
    pub generator_in_x: Vec<Rational>,
    pub generator_in_v: Vec<Rational>,
}

fn compositions(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn build_symmetric_power(m: u32, b: u32) -> Result<SymmetricPower> {
    let base = build_z(ZSpec::new(0, 1, m))?;
    let nvars = m as usize + 2;
    let monomials = compositions(nvars, b);
    let index: HashMap<&[u32], usize> = monomials.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let d = monomials.len();
    // A acts as the derivation sum_{i,j} A_ij X_i d/dX_j.
    let derivation = |a: &QMatrix| {
        let mut out = QMatrix::zeros(d, d);
        for (col, alpha) in monomials.iter().enumerate() {
            for j in 0..nvars {
                if alpha[j] == 0 {
                    continue;
                }
                for i in 0..nvars {
                    let c = a.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    let mut beta = alpha.clone();
                    beta[j] -= 1;
                    beta[i] += 1;
                    *out.get_mut(index[beta.as_slice()], col) += c * int(alpha[j] as i64);
                }
            }
        }
        out
    };
    let x = base.map_generators(derivation);
    let mut gen_exp = vec![0; nvars];
    gen_exp[1] = b;
    let mut generator_in_x = vec![Rational::zero(); d];
    generator_in_x[index[gen_exp.as_slice()]] = Rational::one();
    let sub = generated_submodule(&x, std::slice::from_ref(&generator_in_x))?;
    let v = restrict(&x, &sub)?;
    let generator_in_v = sub
        .coordinates(&generator_in_x)
        .expect("generator lies in its submodule");
    Ok(SymmetricPower {
        x,
        v,
        monomials,
        generator_in_x,
        generator_in_v,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `Z(ℓ, b)`: `u = v_m`, generator of weight `ℓ + bm`.
    Z,
    /// `Z(ℓ, b)^*`: `u = v_0`, generator of weight `ℓ`.
    Dual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Characterization {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
}

impl Characterization {
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3
    }
}

fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Evaluates the recognition conditions for `Z(ℓ, b)` or its dual at `v`.
pub fn check_z_characterization(
    rep: &GRep,
    v: &[Rational],
    ell: u32,
    b: u32,
    variant: Variant,
) -> Result<Characterization> {
    if v.len() != rep.dim() {
        return Err(Error::Dimension("vector length".into()));
    }
    if is_zero_vec(v) {
        return Err(Error::Parameter("v must be nonzero".into()));
    }
    let m = rep.m();
    let weight = match variant {
        Variant::Z => ell + b * m,
        Variant::Dual => ell,
    };
    let hv = rep.h().mul_vec(v)?;
    let maximal = is_zero_vec(&rep.e().mul_vec(v)?) && hv.iter().zip(v).all(|(x, y)| *x == int(weight as i64) * y);
    let c1 = maximal && generated_submodule(rep, &[v.to_vec()])?.len() == rep.dim();

    let u = match variant {
        Variant::Z => &rep.v()[m as usize],
        Variant::Dual => &rep.v()[0],
    };
    let mut powers = vec![v.to_vec()];
    for _ in 0..=b {
        let next = u.mul_vec(powers.last().expect("nonempty"))?;
        powers.push(next);
    }
    let c2 = !is_zero_vec(&powers[b as usize]) && is_zero_vec(&powers[b as usize + 1]);

    let c3 = match variant {
        // [e, v_m] = v_{m-1}
        Variant::Z => m == 0 || is_zero_vec(&rep.v()[m as usize - 1].mul_vec(v)?),
        Variant::Dual => {
            let mut ok = true;
            for i in 0..=b as usize {
                let target = generated_sl2_submodule(rep, &[powers[i + 1].clone()])?;
                for x in rep.v() {
                    if !target.contains(&x.mul_vec(&powers[i])?) {
                        ok = false;
                    }
                }
            }
            ok
        }
    };
    Ok(Characterization { c1, c2, c3 })
}

fn latex_coeff(c: &Rational, symbol: &str) -> String {
    let neg = *c.numer() < num_bigint::BigInt::zero();
    let a = if neg { -c.clone() } else { c.clone() };
    let body = if a.is_one() {
        symbol.to_string()
    } else if a.is_integer() {
        format!("{}{}", a.numer(), symbol)
    } else {
        format!("\\tfrac{{{}}}{{{}}}{}", a.numer(), a.denom(), symbol)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Block matrix of the generic element `h + e + f + sum v_i`, one symbol
/// per generator, with blocks separated by rules. Cells of all-zero
/// off-diagonal blocks are left blank.
pub fn render_latex(rep: &GRep) -> String {
    let n = rep.dim();
    let sizes = block_sizes(rep).unwrap_or_else(|| vec![n]);
    let mut starts = vec![0];
    for s in &sizes {
        starts.push(starts.last().expect("nonempty") + s);
    }
    let block_of = |i: usize| {
        starts
            .iter()
            .rposition(|&s| s <= i)
            .expect("starts at 0")
            .min(sizes.len() - 1)
    };
    let mut symbols: Vec<(String, &QMatrix)> =
        vec![("h".into(), rep.h()), ("e".into(), rep.e()), ("f".into(), rep.f())];
    for (i, x) in rep.v().iter().enumerate() {
        symbols.push((format!("v_{{{i}}}"), x));
    }
    let cell = |r: usize, c: usize| -> String {
        let mut out = String::new();
        for (sym, x) in &symbols {
            let t = x.get(r, c);
            if t.is_zero() {
                continue;
            }
            let term = latex_coeff(t, sym);
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                out = format!("{out} - {rest}");
            } else {
                out = format!("{out} + {term}");
            }
        }
        out
    };
    let mut block_nonzero = vec![vec![false; sizes.len()]; sizes.len()];
    for r in 0..n {
        for c in 0..n {
            if symbols.iter().any(|(_, x)| !x.get(r, c).is_zero()) {
                block_nonzero[block_of(r)][block_of(c)] = true;
            }
        }
    }
    let spec: Vec<String> = sizes.iter().map(|&s| "c".repeat(s)).collect();
    let mut out = format!("\\left(\\begin{{array}}{{{}}}\n", spec.join("|"));
    for r in 0..n {
        let row: Vec<String> = (0..n)
            .map(|c| {
                let s = cell(r, c);
                match (
                    s.is_empty(),
                    block_nonzero[block_of(r)][block_of(c)] || block_of(r) == block_of(c),
                ) {
                    (false, _) => s,
                    (true, true) => "0".into(),
                    (true, false) => String::new(),
                }
            })
            .collect();
        out.push_str(&row.join(" & "));
        out.push_str(" \\\\\n");
        if starts.contains(&(r + 1)) && r + 1 < n {
            out.push_str("\\hline\n");
        }
    }
    out.push_str("\\end{array}\\right)\n");
    out
}

/// Short description of the factor sequence, e.g. `V(1) V(3) V(5)`.
pub fn describe_factors(seq: &[u32]) -> String {
    seq.iter().map(|k| format!("V({k})")).collect::<Vec<_>>().join(" ")
}
