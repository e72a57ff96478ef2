use std::io::Write;
use std::process::Command;

use uniserial_cli::run;
use uniserial_core::constructions::{build_z, ZSpec};
use uniserial_core::gmod::{is_uniserial, socle_series, GRep};

fn call(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("uniserial").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn sixj_table_value() {
    assert_eq!(
        call(&["sixj", "--twoj", "4", "0", "4", "4", "6", "4"]),
        (0, "-1/5\n".into(), String::new())
    );
    assert_eq!(call(&["sixj", "--twoj", "4", "2", "4", "4", "6", "4"]).1, "0\n");
}

#[test]
fn sixj_json_and_csv() {
    let (code, out, _) = call(&["sixj", "--twoj", "4", "4", "4", "4", "6", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sixj"], "4/35");
    let (_, out, _) = call(&["--format", "csv", "sixj", "--twoj", "4", "6", "4", "4", "6", "4"]);
    assert_eq!(out, "twoj1,twoj2,twoj3,twoj4,twoj5,twoj6,sixj\n4,6,4,4,6,4,1/14\n");
}

#[test]
fn admissible_exit_codes() {
    assert_eq!(call(&["admissible", "--m", "4", "--seq", "4,6,4"]).0, 1);
    assert_eq!(call(&["admissible", "--m", "4", "--seq", "4,6,4"]).1, "NotAdmissible\n");
    assert_eq!(
        call(&["admissible", "--m", "3", "--seq", "0,3,2"]),
        (0, "UniqueModule\n".into(), String::new())
    );
    let (code, out, _) = call(&["admissible", "--m", "4", "--seq", "0,4,4,0", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "OneParameterFamily");
    assert!(v["witness"].is_string());
    assert_eq!(call(&["admissible", "--m", "0", "--seq", "1"]).0, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["nonsense"]).0, 2);
    assert_eq!(call(&["sixj", "--twoj", "1", "2"]).0, 2);
    assert_eq!(call(&["cgc", "--twoj", "1", "1", "2", "--twom", "3", "-1", "2"]).0, 2);
    assert_eq!(call(&["realize", "--kind", "z", "--m", "2"]).0, 2);
    assert_eq!(call(&["realize", "--kind", "len3", "--m", "3", "--c", "3"]).0, 2);
    assert_eq!(call(&["realize", "--kind", "zfam", "--m", "6", "--z", "1"]).0, 2);
    assert_eq!(
        call(&["sixj", "--twoj", "0", "0", "0", "0", "0", "0", "--format", "latex"]).0,
        2
    );
    assert_eq!(call(&["socle", "--in", "/nonexistent/file.json"]).0, 2);
    assert_eq!(call(&["zeros", "--max", "2", "--jobs", "0"]).0, 2);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-scalar"));
}

#[test]
fn small_values() {
    assert_eq!(
        call(&["cgc", "--twoj", "1", "1", "2", "--twom", "1", "-1", "0"]).1,
        "1/2*sqrt(2)\n"
    );
    assert_eq!(call(&["delta", "--twoj", "1", "1", "2"]).1, "1/6*sqrt(6)\n");
    assert_eq!(
        call(&["triangle", "--twoj", "2", "2", "2"]),
        (0, "true\n".into(), String::new())
    );
    assert_eq!(call(&["triangle", "--twoj", "1", "1", "1"]).0, 1);
    assert_eq!(
        call(&["recouple", "--twoj", "2", "2", "2", "2"]),
        (0, "true\n".into(), String::new())
    );
}

#[test]
fn realize_latex_layout() {
    let (code, out, _) = call(&[
        "realize", "--kind", "z", "--m", "2", "--ell", "1", "--b", "2", "--format", "latex",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("\\left(\\begin{array}{cc|cccc|cccccc}"));
    assert!(out.contains("h & e & v_{2} & -2v_{1} & v_{0} & 0"));
    assert!(out.contains("5f & -5h"));
}

#[test]
fn realize_round_trips_through_socle() {
    let (code, json, _) = call(&["realize", "--kind", "z", "--m", "2", "--ell", "1", "--b", "2"]);
    assert_eq!(code, 0);
    let rep = GRep::from_json(&json).unwrap();
    assert_eq!(rep, build_z(ZSpec::new(1, 2, 2)).unwrap());

    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(json.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap();
    let (code, out, _) = call(&["socle", "--in", path]);
    assert_eq!(code, 0);
    assert_eq!(out, "1: V(1)\n2: V(3)\n3: V(5)\n");
    let want = socle_series(&rep).unwrap().irreducible_sequence().unwrap();
    let (_, out, _) = call(&["socle", "--in", path, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let got: Vec<u64> = v["layers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l[0]["highest_weight"].as_u64().unwrap())
        .collect();
    assert_eq!(got, want.iter().map(|&k| k as u64).collect::<Vec<_>>());
    assert_eq!(call(&["uniserial", "--in", path]), (0, "true\n".into(), String::new()));
    assert!(is_uniserial(&rep).unwrap());
}

#[test]
fn non_uniserial_module_exits_one() {
    let (_, json, _) = call(&["realize", "--kind", "sympow", "--m", "2", "--b", "2", "--part", "x"]);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(json.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap();
    assert_eq!(call(&["uniserial", "--in", path]), (1, "false\n".into(), String::new()));
    assert_eq!(call(&["socle", "--in", path]).1, "1: V(0)\n2: V(2)\n3: V(0) + V(4)\n");
}

#[test]
fn other_kinds_build() {
    for args in [
        &["realize", "--kind", "zdual", "--m", "2", "--ell", "1", "--b", "2"][..],
        &["realize", "--kind", "len3", "--m", "3", "--c", "2"][..],
        &["realize", "--kind", "zfam", "--m", "4", "--z", "-5/7"][..],
        &["realize", "--kind", "sympow", "--m", "3", "--b", "2"][..],
    ] {
        let (code, json, err) = call(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(GRep::from_json(&json).is_ok());
    }
}

#[test]
fn sweeps_are_independent_of_jobs() {
    let one = call(&["verify-scalar", "--max", "3", "--format", "csv", "--jobs", "1"]);
    let four = call(&["verify-scalar", "--max", "3", "--format", "csv", "--jobs", "4"]);
    assert_eq!(one.0, 0);
    assert_eq!(one, four);
    assert!(one.1.starts_with("a,b,c,p,q,k,lambda,c_factor,sixj,product,agrees\n"));
    assert!(one.1.lines().skip(1).all(|l| l.ends_with(",true")));

    let one = call(&["zeros", "--max", "8", "--jobs", "1"]);
    let three = call(&["zeros", "--max", "8", "--jobs", "3"]);
    assert_eq!(one, three);
    assert!(one.1.lines().any(|l| l == "4 2 4 4 6 4"));

    let (code, out, _) = call(&["verify-classify", "--max-m", "3", "--max-weight", "8", "--jobs", "2"]);
    assert_eq!(code, 0);
    assert!(out.ends_with(", 0 disagreements\n"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_uniserial");
    let out = Command::new(bin)
        .args(["sixj", "--twoj", "4", "0", "4", "4", "6", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "-1/5\n");
    let out = Command::new(bin)
        .args(["admissible", "--m", "4", "--seq", "4,6,4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin).arg("bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
