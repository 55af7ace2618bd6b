//! Command-line front end for the `mgn` binary.
//!
//! Exit codes: 0 when every executed check passes, 1 when a check or an
//! internal consistency assertion fails, 2 on usage errors (bad flags or
//! inputs outside an operation's domain).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cones::{
    conditions_rank, corank_conditions, effective_dual_span, obstruction_witness,
    replay_extremality_proof, ReplayReport,
};
use crate::error::Error;
use crate::hurwitz::{
    class_from_table, enumerative_constants, family_class, fiber_column_identity, table,
    HurwitzFamily, HurwitzKind,
};
use crate::morphisms::{forget_to_two, glue_rational_tail};
use crate::picard::{pair, CurveFunctional, DivisorClass, Space};
use crate::ratlin::Rational;
use crate::surface::{extremality_certificate, pseudo_effective_ray_probe};
use crate::verify::{verify_paper, Grid, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MapKind {
    Forget,
    Glue,
}

#[derive(Parser, Debug)]
#[command(name = "mgn", version)]
#[command(about = "Exact divisor and curve-class computations on Mbar_{g,n}")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersection table of F1, F2, B_Delta with psi1, psi2, delta_0:{1,2}, D_k, E_k
    Table {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        k: u32,
    },
    /// Enumerative counts behind the last two table columns
    Constants {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        k: u32,
    },
    /// Known coefficients of D_k and E_k, recovered two ways
    Class {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        k: u32,
        /// Restrict to one family (D or E)
        #[arg(long)]
        family: Option<HurwitzKind>,
    },
    /// Intersection number of a curve class with a divisor class, both as JSON
    Pairing {
        /// Curve class JSON, or @PATH
        #[arg(long)]
        curve: String,
        /// Divisor class JSON, or @PATH
        #[arg(long)]
        divisor: String,
    },
    /// Covering-curve test for a divisor on Mbar_{g,2}
    Extremality {
        /// Divisor class JSON, or @PATH
        #[arg(long)]
        divisor: String,
        /// Vouch that the divisor is irreducible
        #[arg(long)]
        irreducible: bool,
    },
    /// Pullback images of every generator under a tautological morphism
    PullbackTable {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "forget")]
        map: MapKind,
        /// Kept marking for the forgetful map (all j when omitted)
        #[arg(long)]
        j: Option<u32>,
    },
    /// Rank of the effective dual face of the fibre class
    DualRank {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
    /// Smallest Hurwitz divisor on which the perturbed fibre F^t is negative
    Witness {
        #[arg(long)]
        g: u32,
        /// Perturbation as p/q
        #[arg(long, allow_hyphen_values = true)]
        t: Rational,
    },
    /// Replay every step of the extremality argument for the fibre class
    Replay {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
    /// Run every check over a parameter grid and emit a report
    #[command(alias = "verify")]
    VerifyPaper {
        #[arg(long, default_value_t = 5)]
        gmax: u32,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        #[arg(long, default_value_t = 5)]
        kmax: u32,
    },
}

/// Result of one subcommand: a JSON value, optional markdown, and whether
/// every check it ran passed.
struct Output {
    json: Value,
    markdown: Option<String>,
    pass: bool,
}

impl Output {
    fn plain<T: Serialize>(x: &T) -> Self {
        Output {
            json: to_json(x),
            markdown: None,
            pass: true,
        }
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output serializes")
}

fn read_json_arg(arg: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}"))),
        None => Ok(arg.to_owned()),
    }
}

fn parse_divisor(arg: &str) -> Result<DivisorClass, Error> {
    serde_json::from_str(&read_json_arg(arg)?).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_curve(arg: &str) -> Result<CurveFunctional, Error> {
    serde_json::from_str(&read_json_arg(arg)?).map_err(|e| Error::Parse(e.to_string()))
}

fn replay_markdown(rep: &ReplayReport) -> String {
    let mut out = format!(
        "# Replay on Mbar_{{{},{}}}: {}\n\n| step | pass |\n|---|---|\n",
        rep.g,
        rep.n,
        verdict(rep.pass)
    );
    for s in &rep.steps {
        out.push_str(&format!("| {} | {} |\n", s.name, verdict(s.pass)));
    }
    out
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn execute(cmd: Command) -> Result<Output, Error> {
    Ok(match cmd {
        Command::Table { g, k } => {
            let t = table(g, k)?;
            Output {
                markdown: Some(t.to_markdown()),
                ..Output::plain(&t)
            }
        }
        Command::Constants { g, k } => {
            let identity = fiber_column_identity(g, k)?;
            Output::plain(&json!({
                "g": g,
                "k": k,
                "constants": enumerative_constants(g, k),
                "f1_entry": identity.f1_from_constants,
                "b_delta_entry": identity.b_delta_from_constants,
                "b_delta_decomposition": [identity.constants.case2_count, identity.constants.weierstrass_count],
            }))
        }
        Command::Class { g, k, family } => {
            let kinds = family.map_or(vec![HurwitzKind::D, HurwitzKind::E], |f| vec![f]);
            let mut entries = Vec::new();
            let mut pass = true;
            for kind in kinds {
                let closed = family_class(HurwitzFamily::new(kind, g, k)?)?;
                let solved = class_from_table(g, k, kind)?;
                pass &= closed == solved;
                entries.push(json!({ "family": kind, "class": closed, "agrees_with_table_solve": closed == solved }));
            }
            Output {
                json: Value::Array(entries),
                markdown: None,
                pass,
            }
        }
        Command::Pairing { curve, divisor } => {
            let b = parse_curve(&curve)?;
            let d = parse_divisor(&divisor)?;
            Output::plain(&json!({ "value": pair(&b, &d)? }))
        }
        Command::Extremality {
            divisor,
            irreducible,
        } => {
            let d = parse_divisor(&divisor)?;
            Output::plain(&json!({
                "certificate": extremality_certificate(&d, irreducible)?,
                "probe": pseudo_effective_ray_probe(&d)?,
            }))
        }
        Command::PullbackTable { g, n, map, j } => {
            let s = Space::new(g, n)?;
            let maps = match (map, j) {
                (MapKind::Glue, _) => {
                    vec![json!({ "map": "alpha", "pullback": glue_rational_tail(s)? })]
                }
                (MapKind::Forget, Some(j)) => {
                    vec![json!({ "map": format!("pi_{j}"), "pullback": forget_to_two(s, j)? })]
                }
                (MapKind::Forget, None) => (1..n.max(1))
                    .map(|j| {
                        Ok(json!({ "map": format!("pi_{j}"), "pullback": forget_to_two(s, j)? }))
                    })
                    .collect::<Result<_, Error>>()?,
            };
            Output::plain(&maps)
        }
        Command::DualRank { g, n } => {
            let span = effective_dual_span(g, n)?;
            let corank = if n >= 2 {
                Some(conditions_rank(&corank_conditions(g, n)?)?)
            } else {
                None
            };
            let expected = span.picard_rank - n as usize;
            Output {
                json: json!({
                    "g": g,
                    "n": n,
                    "picard_rank": span.picard_rank,
                    "generators": span.generators.len(),
                    "rank": span.rank,
                    "expected_rank": expected,
                    "corank_conditions_rank": corank,
                }),
                markdown: None,
                pass: span.rank == expected && corank.is_none_or(|r| r == 2),
            }
        }
        Command::Witness { g, t } => Output::plain(&obstruction_witness(g, &t)?),
        Command::Replay { g, n } => {
            let rep = replay_extremality_proof(g, n);
            Output {
                json: to_json(&rep),
                markdown: Some(replay_markdown(&rep)),
                pass: rep.pass,
            }
        }
        Command::VerifyPaper { gmax, nmax, kmax } => {
            let rep: VerificationReport = verify_paper(Grid { gmax, nmax, kmax });
            Output {
                json: to_json(&rep),
                markdown: Some(rep.to_markdown()),
                pass: rep.all_pass(),
            }
        }
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::AssertionFailed(_) => 1,
        _ => 2,
    }
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match execute(cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let mut text = match (cli.format, &result.markdown) {
        (Format::Markdown, Some(md)) => md.clone(),
        (Format::Markdown, None) => format!("```json\n{}\n```\n", pretty(&result.json)),
        (Format::Json, _) => pretty(&result.json),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(err, "error: {msg}");
        return 2;
    }
    if result.pass {
        0
    } else {
        let _ = writeln!(err, "one or more checks failed");
        1
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json renders")
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(
            std::iter::once("mgn").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn table_markdown() {
        let (code, out, _) =
            run_capture(&["table", "--g", "2", "--k", "2", "--format", "markdown"]);
        assert_eq!(code, 0);
        assert!(out.contains("| F1 | 1 | 3 | 1 | 6 | 6 |"));
        assert!(out.contains("| F2 | 3 | 1 | 1 | 70 | 6 |"));
        assert!(out.contains("| B_Delta | 0 | 0 | -2 | 36 | 36 |"));
    }

    #[test]
    fn witness_json() {
        let (code, out, _) = run_capture(&["witness", "--g", "2", "--t", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v, json!({ "family": "D", "k": 5, "value": "-2" }));
        let (_, out, _) = run_capture(&["witness", "--g", "2", "--t", "-1/2"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["family"], "E");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["table", "--g", "2"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["witness", "--g", "2", "--t", "0"]).0, 2);
        assert_eq!(run_capture(&["table", "--g", "1", "--k", "2"]).0, 2);
        assert_eq!(run_capture(&["witness", "--g", "2", "--t", "x/y"]).0, 2);
    }

    #[test]
    fn pairing_from_json() {
        let curve = r#"{"g":2,"n":2,"coeffs":{"psi1":"1","psi2":"3","delta_0:{1,2}":"1"}}"#;
        let divisor = r#"{"g":2,"n":2,"coeffs":{"psi1":"1/2","delta_0:{1,2}":"-2"}}"#;
        let (code, out, err) = run_capture(&["pairing", "--curve", curve, "--divisor", divisor]);
        assert_eq!(code, 0, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"], "-3/2");
    }

    #[test]
    fn extremality_of_diagonal() {
        let d = r#"{"g":3,"n":2,"coeffs":{"delta_0:{1,2}":"1"}}"#;
        let (code, out, _) = run_capture(&["extremality", "--divisor", d, "--irreducible"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["certificate"]["pairing_value"], "-4");
        assert_eq!(v["certificate"]["verdict"], "rigid_extremal");
    }

    #[test]
    fn dual_rank_and_replay() {
        let (code, out, _) = run_capture(&["dual-rank", "--g", "2", "--n", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            (v["rank"].as_u64(), v["picard_rank"].as_u64()),
            (Some(4), Some(6))
        );
        let (code, out, _) =
            run_capture(&["replay", "--g", "2", "--n", "3", "--format", "markdown"]);
        assert_eq!(code, 0);
        assert!(out.contains("| nef_decomposition_system | pass |"));
    }

    #[test]
    fn pullback_table_and_class() {
        let (code, out, _) =
            run_capture(&["pullback-table", "--g", "2", "--n", "3", "--map", "glue"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"map\": \"alpha\""));
        assert_eq!(
            run_capture(&["pullback-table", "--g", "2", "--n", "2"]).0,
            2
        );
        let (code, out, _) = run_capture(&["class", "--g", "2", "--k", "2", "--family", "E"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"agrees_with_table_solve\": true"));
        let (code, out, _) = run_capture(&["constants", "--g", "2", "--k", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"b_delta_entry\": \"36\""));
    }
}
