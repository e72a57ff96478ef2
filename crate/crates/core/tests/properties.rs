use num_traits::{One, Zero};
use proptest::prelude::*;
use uniserial_core::classify::{
    binomial_identity_check, compute_I_J, is_admissible, is_admissible_constructive, span_i_j, AdmissibleStatus,
};
use uniserial_core::exact::{int, kernel, parse_rational, rank, squarefree_split};
use uniserial_core::sl2::{
    decompose, divided_power_change, hom_embedding, iota, irrep, tensor, triangle, Convention, Sl2Rep,
};
use uniserial_core::wigner::{cgc, sixj, SixJInput};
use uniserial_core::{QMatrix, Rational, SqrtRational, SqrtSum};

fn admissible_sixj(max: u32) -> impl Strategy<Value = SixJInput> {
    prop::array::uniform6(0..=max)
        .prop_map(SixJInput)
        .prop_filter("admissible", |x| x.is_admissible())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn sqrt_rational() -> impl Strategy<Value = SqrtRational> {
    (rational(), 1u32..60).prop_map(|(q, s)| SqrtRational::new(q, s.into()))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-3i64..4, rows * cols).prop_map(move |xs| {
        QMatrix::from_rows(xs.chunks(cols).map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    })
}

/// `(a, b, k)` satisfying the triangle condition, with `a, b <= max`.
fn triad(max: u32) -> impl Strategy<Value = (u32, u32, u32)> {
    (0..=max, 0..=max).prop_flat_map(|(a, b)| {
        let lo = a.abs_diff(b);
        (Just(a), Just(b), (0..=(a + b - lo) / 2).prop_map(move |i| lo + 2 * i))
    })
}

/// A neighbor of `a` across `V(m)`: some `b` with `(a, b, m)` a triangle.
fn neighbor(a: u32, m: u32) -> impl Strategy<Value = u32> {
    let lo = a.abs_diff(m);
    (0..=(a + m - lo) / 2).prop_map(move |i| lo + 2 * i)
}

fn chain(m: u32, len: usize) -> BoxedStrategy<Vec<u32>> {
    if len == 1 {
        return (0u32..9).prop_map(|a| vec![a]).boxed();
    }
    chain(m, len - 1)
        .prop_flat_map(move |seq| {
            let last = *seq.last().unwrap();
            neighbor(last, m).prop_map(move |b| {
                let mut s = seq.clone();
                s.push(b);
                s
            })
        })
        .boxed()
}

fn convention() -> impl Strategy<Value = Convention> {
    prop_oneof![Just(Convention::PlainF), Just(Convention::DividedPower)]
}

/// `(−1)^{k/2}` for an even twice-value difference.
fn half_sign(k: i64) -> Rational {
    debug_assert!(k % 2 == 0);
    if (k / 2).rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// A CG coefficient that is zero outside the allowed projection range.
fn cg_or_zero(j1: u32, m1: i32, j2: u32, m2: i32, j3: u32, m3: i32) -> SqrtRational {
    if m3.unsigned_abs() > j3 || (j3 as i32 + m3) % 2 != 0 {
        return SqrtRational::zero();
    }
    cgc(j1, m1, j2, m2, j3, m3).unwrap_or_else(|_| SqrtRational::zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sqrt_mul_is_commutative_and_associative(x in sqrt_rational(), y in sqrt_rational(), z in sqrt_rational()) {
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn sqrt_of_square(q in rational()) {
        let s = SqrtRational::sqrt(&(&q * &q)).unwrap();
        prop_assert_eq!(s.to_rational().unwrap(), if q < Rational::zero() { -q } else { q });
    }

    #[test]
    fn sqrt_round_trips_through_text(x in sqrt_rational()) {
        prop_assert_eq!(x.to_string().parse::<SqrtRational>().unwrap(), x);
    }

    #[test]
    fn squarefree_split_recombines(n in 1u64..100_000) {
        let (k, s) = squarefree_split(&n.into());
        prop_assert_eq!(&k * &k * &s, n.into());
        prop_assert_eq!(squarefree_split(&s).0, 1u32.into());
    }

    #[test]
    fn rational_text_round_trip(q in rational()) {
        prop_assert_eq!(parse_rational(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn rank_nullity(m in matrix(4, 6)) {
        let rows = m.to_rows();
        let k = kernel(&rows, 6);
        prop_assert_eq!(rank(&rows, 6) + k.len(), 6);
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn sixj_symmetries(x in admissible_sixj(10)) {
        let w = sixj(&x).unwrap();
        for y in x.symmetry_images() {
            prop_assert_eq!(sixj(&y).unwrap(), w.clone(), "{} vs {}", x, y);
        }
    }

    #[test]
    fn degenerate_triads_never_vanish(x in admissible_sixj(12)) {
        if x.has_degenerate_triad() {
            prop_assert!(!sixj(&x).unwrap().is_zero(), "{}", x);
        }
    }

    #[test]
    fn cgc_projection_rule(
        (j1, j2, j3) in triad(6),
        idx in prop::array::uniform3(0u32..=12),
    ) {
        let m1 = j1 as i32 - 2 * (idx[0] % (j1 + 1)) as i32;
        let m2 = j2 as i32 - 2 * (idx[1] % (j2 + 1)) as i32;
        let m3 = j3 as i32 - 2 * (idx[2] % (j3 + 1)) as i32;
        let c = cgc(j1, m1, j2, m2, j3, m3).unwrap();
        if m1 + m2 != m3 {
            prop_assert!(c.is_zero());
        }
    }

    #[test]
    fn irreps_satisfy_relations(k in 0u32..13, conv in convention()) {
        prop_assert!(irrep(k, conv).satisfies_relations());
    }

    #[test]
    fn conventions_are_conjugate(k in 0u32..13) {
        let plain = irrep(k, Convention::PlainF);
        let dp = irrep(k, Convention::DividedPower);
        let d = divided_power_change(k);
        let d_inv = QMatrix::diagonal(&d.diag().iter().map(|x| x.recip()).collect::<Vec<_>>());
        for (x, y) in [(plain.e(), dp.e()), (plain.f(), dp.f()), (plain.h(), dp.h())] {
            prop_assert_eq!(&(&d * x) * &d_inv, y.clone());
        }
    }

    #[test]
    fn clebsch_gordan_decomposition(a in 0u32..9, b in 0u32..9) {
        let t = tensor(&irrep(a, Convention::PlainF), &irrep(b, Convention::PlainF)).unwrap();
        let got = decompose(&t).unwrap();
        let want: std::collections::BTreeMap<u32, usize> =
            (a.abs_diff(b)..=a + b).step_by(2).map(|k| (k, 1)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn iota_is_highest_weight((a, b, k) in triad(12)) {
        let v = iota(k, a, b).unwrap();
        let t = tensor(&irrep(a, Convention::PlainF), &irrep(b, Convention::PlainF)).unwrap();
        let x = v.as_slice().to_vec();
        prop_assert!(t.e().mul_vec(&x).unwrap().iter().all(Zero::is_zero));
        let hx = t.h().mul_vec(&x).unwrap();
        prop_assert!(hx.iter().zip(&x).all(|(p, q)| *p == int(k as i64) * q));
        prop_assert!(!v.is_zero());
    }

    #[test]
    fn hom_embedding_is_equivariant((a, b, m) in triad(8), conv in convention()) {
        prop_assume!(m <= 8);
        let f = hom_embedding(m, b, a, conv).unwrap();
        let (ra, rb): (Sl2Rep, Sl2Rep) = (irrep(a, conv), irrep(b, conv));
        let act = |x: &QMatrix, y: &QMatrix, g: &QMatrix| &(x * g) - &(g * y);
        let n = m as usize;
        for i in 0..=n {
            let mi = m as i64 - 2 * i as i64;
            prop_assert_eq!(act(ra.h(), rb.h(), &f[i]), f[i].scale(&int(mi)));
            let fe = if i == 0 { QMatrix::zeros(a as usize + 1, b as usize + 1) } else { f[i - 1].scale(&int((n - i + 1) as i64)) };
            prop_assert_eq!(act(ra.e(), rb.e(), &f[i]), fe);
            let ff = if i == n { QMatrix::zeros(a as usize + 1, b as usize + 1) } else { f[i + 1].scale(&int(i as i64 + 1)) };
            prop_assert_eq!(act(ra.f(), rb.f(), &f[i]), ff);
        }
    }

    #[test]
    fn admissibility_is_reversal_invariant(seq in prop::collection::vec(0u32..10, 1..7), m in 1u32..6) {
        let rev: Vec<u32> = seq.iter().rev().copied().collect();
        prop_assert_eq!(is_admissible(&seq, m).unwrap().status, is_admissible(&rev, m).unwrap().status);
    }

    #[test]
    fn admissible_windows_are_admissible(start in 0u32..6, len in 3usize..7, m in 1u32..6, pick in 0usize..3) {
        let seqs = [
            (0..len as u32).map(|i| start + i * m).collect::<Vec<_>>(),
            vec![0, m, m, 0],
            vec![0, m, 2 * m - 4 * (start % (m / 2 + 1))],
        ];
        let seq = &seqs[pick];
        if is_admissible(seq, m).unwrap().status != AdmissibleStatus::NotAdmissible {
            for w in seq.windows(3) {
                prop_assert_ne!(is_admissible(w, m).unwrap().status, AdmissibleStatus::NotAdmissible, "{:?} in {:?}", w, seq);
            }
        }
    }

    #[test]
    fn closed_form_matches_constructive(
        (m, seq) in (1u32..5, 2usize..5).prop_flat_map(|(m, len)| (Just(m), chain(m, len)))
    ) {
        let closed = is_admissible(&seq, m).unwrap().status != AdmissibleStatus::NotAdmissible;
        prop_assert_eq!(closed, is_admissible_constructive(&seq, m).unwrap(), "{:?}", seq);
    }

    #[test]
    fn image_sets_agree(
        (a, b, p, c, q) in triad(6)
            .prop_flat_map(|(a, b, p)| (Just(a), Just(b), Just(p), 0u32..7))
            .prop_flat_map(|(a, b, p, c)| (Just(a), Just(b), Just(p), Just(c), neighbor(c, b)))
    ) {
        let r = compute_I_J(a, b, c, p, q).unwrap();
        prop_assert_eq!(&r, &span_i_j(a, b, c, p, q).unwrap());
        if let Some(j) = &r.j {
            prop_assert!(j.is_subset(&r.i));
        }
    }
}

#[test]
fn binomial_identity_sweep() {
    for x in 0..=12 {
        for y in 0..=12 {
            for z in 0..=y {
                assert!(binomial_identity_check(x, y, z).unwrap(), "({x},{y},{z})");
            }
        }
    }
}

#[test]
fn sixj_zero_pattern_decides_length_three() {
    // For m <= 6 and weights <= 14 the 6j vanishing pattern on the
    // residue class k = 2m - 2 mod 4 matches the closed-form condition.
    for m in 1..=6u32 {
        for a in 0..=14 {
            for b in 0..=14 {
                for c in 0..=14 {
                    if !(triangle(a, b, m) && triangle(b, c, m)) {
                        continue;
                    }
                    let all_zero = (0..=2 * m)
                        .filter(|k| k % 4 == (2 * m + 2) % 4)
                        .all(|k| sixj(&SixJInput([m, k, m, a, b, c])).unwrap().is_zero());
                    let j = compute_I_J(a, b, c, m, m).unwrap().j.unwrap();
                    assert_eq!(all_zero, j.is_empty(), "m={m} ({a},{b},{c})");
                }
            }
        }
    }
}

/// Residual of the bilinear CGC/6j identity at one `(j, m)` configuration.
fn bilinear_residual(j: [u32; 5], m1: i32, m2: i32, m4: i32) -> SqrtSum {
    let [j1, j2, j3, j4, j5] = j;
    let (m3, m6) = (m1 + m2, m2 + m4);
    let m5 = m3 + m4;
    let lhs = cg_or_zero(j1, m1, j2, m2, j3, m3)
        .mul(&cg_or_zero(j3, m3, j4, m4, j5, m5))
        .scale(&half_sign(j1 as i64 - j2 as i64 - j4 as i64 + j5 as i64))
        .div(&SqrtRational::sqrt(&int(j3 as i64 + 1)).unwrap())
        .unwrap();
    let mut sum = SqrtSum::new();
    for j6 in 0..=j2 + j4 {
        if !triangle(j2, j4, j6) || !triangle(j1, j5, j6) || m6.unsigned_abs() > j6 {
            continue;
        }
        let w = sixj(&SixJInput([j1, j2, j3, j4, j5, j6])).unwrap();
        let sign = if j6 % 2 == 0 { int(1) } else { int(-1) };
        let term = SqrtRational::sqrt(&int(j6 as i64 + 1))
            .unwrap()
            .mul(&w)
            .mul(&cg_or_zero(j2, m2, j4, m4, j6, m6))
            .mul(&cg_or_zero(j1, m1, j6, m6, j5, m5))
            .scale(&sign);
        sum.add(&term);
    }
    sum.add(&lhs.neg());
    sum
}

#[test]
fn cgc_sixj_bilinear_identity() {
    let mut checked = 0;
    for j1 in 0..=6u32 {
        for j2 in 0..=6 {
            for j3 in 0..=6 {
                if !triangle(j1, j2, j3) {
                    continue;
                }
                for j4 in 0..=6 {
                    for j5 in 0..=6 {
                        if !triangle(j3, j4, j5) {
                            continue;
                        }
                        for m1 in (-(j1 as i32)..=j1 as i32).step_by(2) {
                            for m2 in (-(j2 as i32)..=j2 as i32).step_by(2) {
                                for m4 in (-(j4 as i32)..=j4 as i32).step_by(2) {
                                    if (m1 + m2).unsigned_abs() > j3 || (m1 + m2 + m4).unsigned_abs() > j5 {
                                        continue;
                                    }
                                    let r = bilinear_residual([j1, j2, j3, j4, j5], m1, m2, m4);
                                    assert!(r.is_zero(), "{:?} m=({m1},{m2},{m4}): {r}", [j1, j2, j3, j4, j5]);
                                    checked += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 5000, "{checked}");
}
