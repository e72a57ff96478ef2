mod common;

use num_traits::Zero;
use uniserial_core::constructions::{
    build_exceptional_len3, build_from_sequence, build_symmetric_power, build_z, build_z_dual, build_z_family,
    check_z_characterization, render_latex, SequenceOutcome, Variant, ZSpec,
};
use uniserial_core::exact::{int, rat};
use uniserial_core::gmod::{block_sizes, check_rep, dual_rep, is_uniserial, socle_series, GRep};
use uniserial_core::{QMatrix, Rational};

use common::{mismatches, parse_display, symbols, Z12_DISPLAY};

fn display(rows: &[&str], m: u32, z: &Rational) -> std::collections::BTreeMap<String, QMatrix> {
    let syms = symbols(m);
    let syms: Vec<&str> = syms.iter().map(String::as_str).collect();
    parse_display(rows, &syms, z)
}

const LEN3_M3: [&str; 8] = [
    "0 -v3 3v2 -3v1 v0 . . .",
    ". 3h 3e 0 0 -3v1 3v0 0",
    ". f h 2e 0 -2v2 v1 v0",
    ". 0 2f -h e -v3 -v2 2v1",
    ". 0 0 3f -3h 0 -3v3 3v2",
    ". . . . . 2h 2e 0",
    ". . . . . f 0 e",
    ". . . . . 0 2f -2h",
];

const ZFAM_M4: [&str; 12] = [
    "0 v4 -4v3 6v2 -4v1 v0 . . . . . .",
    ". 4h 4e 0 0 0 6v2 -12v1 6v0 0 0 zv0",
    ". f 2h 3e 0 0 3v3 -3v2 -3v1 3v0 0 zv1",
    ". 0 2f 0 2e 0 v4 2v3 -6v2 2v1 v0 zv2",
    ". 0 0 3f -2h e 0 3v4 -3v3 -3v2 3v1 zv3",
    ". 0 0 0 4f -4h 0 0 6v4 -12v3 6v2 zv4",
    ". . . . . . 4h 4e 0 0 0 v0",
    ". . . . . . f 2h 3e 0 0 v1",
    ". . . . . . 0 2f 0 2e 0 v2",
    ". . . . . . 0 0 3f -2h e v3",
    ". . . . . . 0 0 0 4f -4h v4",
    ". . . . . . . . . . . 0",
];

#[test]
fn z12_matches_display() {
    let rep = build_z(ZSpec::new(1, 2, 2)).unwrap();
    assert!(mismatches(&rep, &display(&Z12_DISPLAY, 2, &Rational::zero())).is_empty());
}

#[test]
fn len3_matches_display() {
    let rep = build_exceptional_len3(3, 2).unwrap();
    assert_eq!(
        mismatches(&rep, &display(&LEN3_M3, 3, &Rational::zero())),
        Vec::<String>::new()
    );
}

#[test]
fn z_family_matches_display() {
    for z in [int(0), int(1), int(-1), rat(5, 7)] {
        let rep = build_z_family(4, &z).unwrap();
        assert_eq!(
            mismatches(&rep, &display(&ZFAM_M4, 4, &z)),
            Vec::<String>::new(),
            "z = {z}"
        );
        assert!(check_rep(&rep).holds());
        assert!(is_uniserial(&rep).unwrap());
    }
}

/// True when `a` and `b` agree after rescaling each superdiagonal block.
fn equal_up_to_block_scaling(a: &GRep, b: &GRep) -> bool {
    let sizes = block_sizes(a).unwrap();
    if block_sizes(b).as_ref() != Some(&sizes) || a.h() != b.h() || a.e() != b.e() || a.f() != b.f() {
        return false;
    }
    let starts: Vec<usize> = sizes
        .iter()
        .scan(0, |s, &n| Some(std::mem::replace(s, *s + n)))
        .collect();
    for t in 0..sizes.len() - 1 {
        let (r0, c0) = (starts[t], starts[t + 1]);
        let mut ratio: Option<Rational> = None;
        for (x, y) in a.v().iter().zip(b.v()) {
            for i in r0..r0 + sizes[t] {
                for j in c0..c0 + sizes[t + 1] {
                    let (p, q) = (x.get(i, j), y.get(i, j));
                    if p.is_zero() != q.is_zero() {
                        return false;
                    }
                    if p.is_zero() {
                        continue;
                    }
                    let r = p / q;
                    if ratio.get_or_insert_with(|| r.clone()) != &r {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn sequence_builder_recovers_z() {
    let ones = [int(1), int(1)];
    let built = build_from_sequence(&[1, 3, 5], 2, &ones).unwrap().module().unwrap();
    assert!(equal_up_to_block_scaling(
        &built,
        &build_z(ZSpec::new(1, 2, 2)).unwrap()
    ));
    for (m, ell, b) in [(1, 0, 3), (3, 2, 2), (2, 0, 4)] {
        let seq = ZSpec::new(ell, b, m).factors();
        let scalars = vec![int(1); seq.len() - 1];
        let built = build_from_sequence(&seq, m, &scalars).unwrap().module().unwrap();
        assert!(equal_up_to_block_scaling(
            &built,
            &build_z(ZSpec::new(ell, b, m)).unwrap()
        ));
    }
}

#[test]
fn non_admissible_sequence_reports_commutator() {
    match build_from_sequence(&[4, 6, 4], 4, &[int(1), int(1)]).unwrap() {
        SequenceOutcome::NotAbelian { commutator, .. } => assert!(!commutator.is_zero()),
        SequenceOutcome::Module(_) => panic!("[4,6,4] must fail"),
    }
}

#[test]
fn duals() {
    let spec = ZSpec::new(1, 2, 2);
    let d = build_z_dual(spec).unwrap();
    assert!(check_rep(&d).holds());
    assert_eq!(socle_series(&d).unwrap().irreducible_sequence(), Some(vec![5, 3, 1]));
    let z = build_z(spec).unwrap();
    assert_eq!(dual_rep(&dual_rep(&z)), z);
    assert_eq!(
        socle_series(&dual_rep(&z)).unwrap().irreducible_sequence(),
        Some(vec![5, 3, 1])
    );
    let d = build_z_dual(ZSpec::new(0, 2, 3)).unwrap();
    assert!(check_rep(&d).holds());
    assert_eq!(socle_series(&d).unwrap().irreducible_sequence(), Some(vec![6, 3, 0]));
    assert_eq!(build_z_dual(ZSpec::new(4, 0, 2)).unwrap().dim(), 5);
}

#[test]
fn dual_characterization() {
    for (ell, b, m) in [(0, 1, 2), (1, 2, 2), (0, 2, 3), (2, 3, 1)] {
        let d = build_z_dual(ZSpec::new(ell, b, m)).unwrap();
        let sizes = block_sizes(&d).unwrap();
        // The top of the dual is the first block; after the transpose its
        // highest weight vector is the last basis vector of that block.
        let mut v = vec![Rational::zero(); d.dim()];
        v[sizes[0] - 1] = int(1);
        let c = check_z_characterization(&d, &v, ell, b, Variant::Dual).unwrap();
        assert!(c.all(), "({ell},{b},{m}) {c:?}");
    }
}

#[test]
fn characterization_failures() {
    let z = build_z(ZSpec::new(0, 2, 2)).unwrap();
    let mut v = vec![Rational::zero(); z.dim()];
    v[z.dim() - 2] = int(1);
    assert!(!check_z_characterization(&z, &v, 0, 2, Variant::Z).unwrap().c1);
    assert!(check_z_characterization(&z, &vec![Rational::zero(); z.dim()], 0, 2, Variant::Z).is_err());
    let trivial = build_z(ZSpec::new(3, 0, 2)).unwrap();
    let mut hw = vec![Rational::zero(); 4];
    hw[0] = int(1);
    assert!(check_z_characterization(&trivial, &hw, 3, 0, Variant::Z).unwrap().all());
}

#[test]
fn symmetric_power_shapes() {
    let sp = build_symmetric_power(1, 3).unwrap();
    assert_eq!(sp.x.dim(), sp.v.dim());
    let sp = build_symmetric_power(2, 1).unwrap();
    let layers = socle_series(&sp.x).unwrap().factors();
    assert_eq!(layers.len(), 2);
    assert_eq!(layers[0].keys().copied().collect::<Vec<_>>(), vec![0]);
    assert_eq!(layers[1].keys().copied().collect::<Vec<_>>(), vec![2]);
    assert_eq!(build_symmetric_power(2, 2).unwrap().x.dim(), 10);
}

#[test]
fn json_round_trip() {
    for rep in [
        build_z(ZSpec::new(1, 2, 2)).unwrap(),
        build_z_family(4, &rat(5, 7)).unwrap(),
        build_exceptional_len3(3, 2).unwrap(),
    ] {
        let text = rep.to_json().to_string();
        assert_eq!(GRep::from_json(&text).unwrap(), rep);
    }
    assert!(GRep::from_json("{\"m\": 1}").is_err());
}

#[test]
fn latex_lists_blocks() {
    let t = render_latex(&build_exceptional_len3(3, 2).unwrap());
    assert!(t.contains("-v_{3} & 3v_{2} & -3v_{1} & v_{0}"));
}
