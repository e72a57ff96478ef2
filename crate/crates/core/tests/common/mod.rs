use std::collections::BTreeMap;

use uniserial_core::exact::int;
use uniserial_core::gmod::GRep;
use uniserial_core::{QMatrix, Rational};

/// Parses a displayed generic matrix. Cells are `.`/`0` (zero) or a
/// coefficient followed by a generator name, e.g. `-2v1`, `3h`, `zv0`.
/// A coefficient of `z` stands for the given parameter.
pub fn parse_display(rows: &[&str], symbols: &[&str], z: &Rational) -> BTreeMap<String, QMatrix> {
    let n = rows.len();
    let mut out: BTreeMap<String, QMatrix> = symbols.iter().map(|s| (s.to_string(), QMatrix::zeros(n, n))).collect();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(cells.len(), n, "row {i}");
        for (j, cell) in cells.into_iter().enumerate() {
            if cell == "." || cell == "0" {
                continue;
            }
            let sym = symbols
                .iter()
                .filter(|s| cell.ends_with(**s))
                .max_by_key(|s| s.len())
                .unwrap_or_else(|| panic!("cell {cell}"));
            let coeff = match &cell[..cell.len() - sym.len()] {
                "" => int(1),
                "-" => int(-1),
                "z" => z.clone(),
                c => c.parse::<i64>().map(int).unwrap_or_else(|_| panic!("cell {cell}")),
            };
            out.get_mut(*sym).unwrap().set(i, j, coeff);
        }
    }
    out
}

/// Names of the generators whose matrices differ from the display.
#[allow(dead_code)]
pub fn mismatches(rep: &GRep, want: &BTreeMap<String, QMatrix>) -> Vec<String> {
    let mut out = Vec::new();
    for (name, got) in [("h", rep.h()), ("e", rep.e()), ("f", rep.f())] {
        if *got != want[name] {
            out.push(name.to_string());
        }
    }
    for (i, got) in rep.v().iter().enumerate() {
        let name = format!("v{i}");
        if *got != want[&name] {
            out.push(name);
        }
    }
    out
}

#[allow(dead_code)]
pub fn symbols(m: u32) -> Vec<String> {
    ["h", "e", "f"]
        .iter()
        .map(|s| s.to_string())
        .chain((0..=m).map(|i| format!("v{i}")))
        .collect()
}

/// The displayed 12x12 realization of `Z(1,2)` for `m = 2`.
pub const Z12_DISPLAY: [&str; 12] = [
    "h e v2 -2v1 v0 0 . . . . . .",
    "f -h 0 v2 -2v1 v0 . . . . . .",
    ". . 3h 3e 0 0 v2 -2v1 v0 0 0 0",
    ". . f h 2e 0 0 v2 -2v1 v0 0 0",
    ". . 0 2f -h e 0 0 v2 -2v1 v0 0",
    ". . 0 0 3f -3h 0 0 0 v2 -2v1 v0",
    ". . . . . . 5h 5e 0 0 0 0",
    ". . . . . . f 3h 4e 0 0 0",
    ". . . . . . 0 2f h 3e 0 0",
    ". . . . . . 0 0 3f -h 2e 0",
    ". . . . . . 0 0 0 4f -3h e",
    ". . . . . . 0 0 0 0 5f -5h",
];
