//! Command-line front end. `run` is the whole program minus process
//! plumbing, so it can be driven from tests.
//!
//! Exit codes: 0 success or "true", 1 a mathematical "false" or failed
//! check, 2 usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use uniserial_core::classify::{classify_sweep, is_admissible, scalar_sweep, verify_recoupling};
use uniserial_core::constructions::{
    build_exceptional_len3, build_symmetric_power, build_z, build_z_dual, build_z_family, render_latex, ZSpec,
};
use uniserial_core::exact::parse_rational;
use uniserial_core::gmod::{is_uniserial, socle_series, GRep};
use uniserial_core::sl2::{triangle, Decomposition};
use uniserial_core::wigner::{cgc, delta, find_sixj_zeros, sixj, SixJInput};
use uniserial_core::{Error, Rational};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "uniserial",
    version,
    about = "Exact 6j-symbols and uniserial sl(2) ⋉ V(m)-modules"
)]
struct Cli {
    /// Worker threads for sweeps (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output format; not every subcommand supports every format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// 6j-symbol {j1 j2 j3; j4 j5 j6} from twice-values.
    Sixj {
        #[arg(long, num_args = 6, required = true, value_names = ["J1", "J2", "J3", "J4", "J5", "J6"])]
        twoj: Vec<u32>,
    },
    /// Clebsch-Gordan coefficient <j1 m1 j2 m2 | j3 m3> from twice-values.
    Cgc {
        #[arg(long, num_args = 3, required = true, value_names = ["J1", "J2", "J3"])]
        twoj: Vec<u32>,
        #[arg(long, num_args = 3, required = true, allow_hyphen_values = true, value_names = ["M1", "M2", "M3"])]
        twom: Vec<i32>,
    },
    /// Triangle coefficient Δ(a, b, c) from twice-values.
    Delta {
        #[arg(long, num_args = 3, required = true, value_names = ["A", "B", "C"])]
        twoj: Vec<u32>,
    },
    /// Whether V(c) occurs in V(a) ⊗ V(b).
    Triangle {
        #[arg(long, num_args = 3, required = true, value_names = ["A", "B", "C"])]
        twoj: Vec<u32>,
    },
    /// Emit a module as JSON or LaTeX.
    Realize(RealizeArgs),
    /// Socle series of a module read from JSON.
    Socle {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Whether a module read from JSON is uniserial.
    Uniserial {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Classify a sequence of socle factors.
    Admissible {
        #[arg(long)]
        m: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<u32>,
    },
    /// Non-trivial zeros of the 6j-symbol with all twice-values <= max.
    Zeros {
        #[arg(long)]
        max: u32,
    },
    /// Check the composite-embedding scalar against C·6j for all tuples <= max.
    VerifyScalar {
        #[arg(long)]
        max: u32,
    },
    /// Compare the length-three admissibility criteria.
    VerifyClassify {
        #[arg(long)]
        max_m: u32,
        #[arg(long)]
        max_weight: u32,
    },
    /// Check the recoupling coefficients of V(a) ⊗ V(b) ⊗ V(c) at V(k).
    Recouple {
        #[arg(long, num_args = 4, required = true, value_names = ["A", "B", "C", "K"])]
        twoj: Vec<u32>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Z,
    Zdual,
    Len3,
    Zfam,
    Sympow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Part {
    V,
    X,
}

#[derive(Args, Debug)]
struct RealizeArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    c: Option<u32>,
    /// Family parameter, as `p/q` or an integer.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// For `sympow`: the generated submodule (`v`) or the whole space (`x`).
    #[arg(long, value_enum, default_value_t = Part::V)]
    part: Part,
}

/// Outcome of a subcommand before it is mapped to an exit code.
enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::FormulaMismatch(_) | Error::NonDiagonalH | Error::NegativeRadicand => Failure::Math(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Math(format!("write failed: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Math(format!("write failed: {e}"))
    }
}

type Outcome = std::result::Result<bool, Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be positive".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let mut buf = Vec::new();
                let r = pool.install(|| dispatch(&cli, &mut buf));
                match out.write_all(&buf) {
                    Ok(()) => r,
                    Err(e) => Err(e.into()),
                }
            }
            Err(e) => Err(Failure::Usage(e.to_string())),
        },
        None => dispatch(&cli, out),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FALSE,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Math(msg)) => {
            let _ = writeln!(err, "failure: {msg}");
            EXIT_FALSE
        }
    }
}

fn unsupported(format: Format, command: &str) -> Failure {
    Failure::Usage(format!("--format {format:?} is not supported by `{command}`").to_lowercase())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Sixj { twoj } => {
            let x = SixJInput([twoj[0], twoj[1], twoj[2], twoj[3], twoj[4], twoj[5]]);
            let v = sixj(&x)?.to_string();
            scalar_output(out, fmt, "sixj", &twoj_labels(6), twoj, &v)
        }
        Command::Cgc { twoj, twom } => {
            let v = cgc(twoj[0], twom[0], twoj[1], twom[1], twoj[2], twom[2])?.to_string();
            let params: Vec<String> = twoj
                .iter()
                .map(u32::to_string)
                .chain(twom.iter().map(i32::to_string))
                .collect();
            let labels = ["twoj1", "twoj2", "twoj3", "twom1", "twom2", "twom3"];
            scalar_output_str(out, fmt, "cgc", &labels, &params, &v)
        }
        Command::Delta { twoj } => {
            let v = delta(twoj[0], twoj[1], twoj[2]).to_string();
            scalar_output(out, fmt, "delta", &twoj_labels(3), twoj, &v)
        }
        Command::Triangle { twoj } => {
            let holds = triangle(twoj[0], twoj[1], twoj[2]);
            scalar_output(out, fmt, "triangle", &twoj_labels(3), twoj, &holds.to_string())?;
            Ok(holds)
        }
        Command::Realize(args) => realize(args, fmt, out),
        Command::Socle { input } => {
            let rep = read_rep(input)?;
            let series = socle_series(&rep)?;
            let layers = series.factors();
            let uniserial = series.irreducible_sequence().is_some();
            match fmt {
                Format::Text => {
                    for (i, layer) in layers.iter().enumerate() {
                        writeln!(out, "{}: {}", i + 1, describe(layer))?;
                    }
                }
                Format::Json => {
                    let layers: Vec<serde_json::Value> = layers
                        .iter()
                        .map(|l| {
                            l.iter()
                                .map(|(k, n)| serde_json::json!({"highest_weight": k, "multiplicity": n}))
                                .collect()
                        })
                        .collect();
                    writeln!(out, "{}", serde_json::json!({"layers": layers, "uniserial": uniserial}))?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["layer", "highest_weight", "multiplicity"])?;
                    for (i, layer) in layers.iter().enumerate() {
                        for (k, n) in layer {
                            w.write_record([(i + 1).to_string(), k.to_string(), n.to_string()])?;
                        }
                    }
                    w.flush()?;
                }
                Format::Latex => return Err(unsupported(fmt, "socle")),
            }
            Ok(true)
        }
        Command::Uniserial { input } => {
            let rep = read_rep(input)?;
            let u = is_uniserial(&rep)?;
            match fmt {
                Format::Text => writeln!(out, "{u}")?,
                Format::Json => writeln!(out, "{}", serde_json::json!({ "uniserial": u }))?,
                _ => return Err(unsupported(fmt, "uniserial")),
            }
            Ok(u)
        }
        Command::Admissible { m, seq } => {
            let verdict = is_admissible(seq, *m)?;
            let admissible = verdict.status != uniserial_core::classify::AdmissibleStatus::NotAdmissible;
            match fmt {
                Format::Text => writeln!(out, "{}", verdict.status)?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({
                        "m": m,
                        "seq": seq,
                        "status": verdict.status.to_string(),
                        "witness": verdict.witness,
                    })
                )?,
                _ => return Err(unsupported(fmt, "admissible")),
            }
            Ok(admissible)
        }
        Command::Zeros { max } => {
            let zeros = find_sixj_zeros([*max; 6], |_| true);
            match fmt {
                Format::Text => {
                    for z in &zeros {
                        writeln!(out, "{}", z.0.map(|x| x.to_string()).join(" "))?;
                    }
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(twoj_labels(6))?;
                    for z in &zeros {
                        w.write_record(z.0.map(|x| x.to_string()))?;
                    }
                    w.flush()?;
                }
                Format::Json => {
                    let list: Vec<[u32; 6]> = zeros.iter().map(|z| z.0).collect();
                    writeln!(out, "{}", serde_json::json!(list))?;
                }
                Format::Latex => return Err(unsupported(fmt, "zeros")),
            }
            Ok(true)
        }
        Command::VerifyScalar { max } => {
            let reports = scalar_sweep(*max)?;
            let agree = reports.iter().filter(|r| r.agrees).count();
            match fmt {
                Format::Text => writeln!(
                    out,
                    "{} tuples, {} agree, {} disagree",
                    reports.len(),
                    agree,
                    reports.len() - agree
                )?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record([
                        "a", "b", "c", "p", "q", "k", "lambda", "c_factor", "sixj", "product", "agrees",
                    ])?;
                    for r in &reports {
                        let mut row: Vec<String> = [r.a, r.b, r.c, r.p, r.q, r.k].iter().map(u32::to_string).collect();
                        row.extend([
                            r.lambda.to_string(),
                            r.c_factor.to_string(),
                            r.sixj.to_string(),
                            r.product.to_string(),
                            r.agrees.to_string(),
                        ]);
                        w.write_record(&row)?;
                    }
                    w.flush()?;
                }
                Format::Json => writeln!(out, "{}", serde_json::json!({"tuples": reports.len(), "agree": agree}))?,
                Format::Latex => return Err(unsupported(fmt, "verify-scalar")),
            }
            Ok(agree == reports.len())
        }
        Command::VerifyClassify { max_m, max_weight } => {
            if *max_m == 0 {
                return Err(Failure::Usage("--max-m must be positive".into()));
            }
            let rows = classify_sweep(*max_m, *max_weight)?;
            let bad = rows.iter().filter(|r| !r.agree()).count();
            let admissible = rows.iter().filter(|r| r.closed_form).count();
            match fmt {
                Format::Text => writeln!(
                    out,
                    "{} triples, {} admissible, {} disagreements",
                    rows.len(),
                    admissible,
                    bad
                )?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record([
                        "m",
                        "a",
                        "b",
                        "c",
                        "closed_form",
                        "j_empty_sixj",
                        "j_empty_span",
                        "builds",
                    ])?;
                    for r in &rows {
                        w.write_record([
                            r.m.to_string(),
                            r.a.to_string(),
                            r.b.to_string(),
                            r.c.to_string(),
                            r.closed_form.to_string(),
                            r.j_empty_sixj.to_string(),
                            r.j_empty_span.to_string(),
                            r.builds.to_string(),
                        ])?;
                    }
                    w.flush()?;
                }
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({"triples": rows.len(), "admissible": admissible, "disagreements": bad})
                )?,
                Format::Latex => return Err(unsupported(fmt, "verify-classify")),
            }
            Ok(bad == 0)
        }
        Command::Recouple { twoj } => {
            let ok = verify_recoupling(twoj[0], twoj[1], twoj[2], twoj[3])?;
            scalar_output(out, fmt, "recouple", &["a", "b", "c", "k"], twoj, &ok.to_string())?;
            Ok(ok)
        }
    }
}

fn twoj_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("twoj{i}")).collect()
}

fn scalar_output<L: AsRef<str>>(
    out: &mut dyn Write,
    fmt: Format,
    name: &str,
    labels: &[L],
    params: &[u32],
    value: &str,
) -> Outcome {
    let params: Vec<String> = params.iter().map(u32::to_string).collect();
    scalar_output_str(out, fmt, name, labels, &params, value)
}

fn scalar_output_str<L: AsRef<str>>(
    out: &mut dyn Write,
    fmt: Format,
    name: &str,
    labels: &[L],
    params: &[String],
    value: &str,
) -> Outcome {
    match fmt {
        Format::Text => writeln!(out, "{value}")?,
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (l, p) in labels.iter().zip(params) {
                obj.insert(l.as_ref().to_string(), serde_json::Value::String(p.clone()));
            }
            obj.insert(name.to_string(), serde_json::Value::String(value.to_string()));
            writeln!(out, "{}", serde_json::Value::Object(obj))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(labels.iter().map(AsRef::as_ref).chain([name]))?;
            w.write_record(params.iter().map(String::as_str).chain([value]))?;
            w.flush()?;
        }
        Format::Latex => return Err(unsupported(fmt, name)),
    }
    Ok(true)
}

fn describe(layer: &Decomposition) -> String {
    layer
        .iter()
        .map(|(k, n)| {
            if *n == 1 {
                format!("V({k})")
            } else {
                format!("{n}V({k})")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn read_rep(path: &PathBuf) -> std::result::Result<GRep, Failure> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(GRep::from_json(&text)?)
}

fn required(value: Option<u32>, flag: &str, kind: Kind) -> std::result::Result<u32, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--kind {kind:?} requires --{flag}").to_lowercase()))
}

fn realize(args: &RealizeArgs, fmt: Format, out: &mut dyn Write) -> Outcome {
    let m = args.m;
    if m == 0 {
        return Err(Failure::Usage("--m must be positive".into()));
    }
    let rep = match args.kind {
        Kind::Z | Kind::Zdual => {
            let spec = ZSpec::new(
                required(args.ell, "ell", args.kind)?,
                required(args.b, "b", args.kind)?,
                m,
            );
            if args.kind == Kind::Z {
                build_z(spec)?
            } else {
                build_z_dual(spec)?
            }
        }
        Kind::Len3 => build_exceptional_len3(m, required(args.c, "c", args.kind)?)?,
        Kind::Zfam => {
            let z: Rational = match &args.z {
                Some(s) => parse_rational(s)?,
                None => return Err(Failure::Usage("--kind zfam requires --z".into())),
            };
            build_z_family(m, &z)?
        }
        Kind::Sympow => {
            let sp = build_symmetric_power(m, required(args.b, "b", args.kind)?)?;
            match args.part {
                Part::V => sp.v,
                Part::X => sp.x,
            }
        }
    };
    match fmt {
        Format::Text | Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&rep.to_json()).expect("json"))?
        }
        Format::Latex => writeln!(out, "{}", render_latex(&rep))?,
        Format::Csv => return Err(unsupported(fmt, "realize")),
    }
    Ok(true)
}
