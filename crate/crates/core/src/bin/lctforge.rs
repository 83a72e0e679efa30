use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lctforge::certs::{check_poly_file, verify_file, CertError, RunReport};
use lctforge::exact::PolyEquality;
use lctforge::local_ineq::{corti_bound, lct_monomial, mobile_bound_thmII, vertex_alpha_beta, MonomialForm, VertexOutcome};
use lctforge::wps::{ledger_consistency, parse_ledger};
use lctforge::Rational;

/// Exact verification of log canonical threshold certificates.
#[derive(Parser)]
#[command(name = "lctforge", version)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run certificate files.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Check an intersection ledger for consistency.
    Ledger { file: PathBuf },
    /// Solve for (alpha, beta) at the vertex and validate the hypotheses.
    #[command(name = "vertex-ab")]
    VertexAb {
        #[arg(allow_hyphen_values = true)]
        a: Rational,
        #[arg(allow_hyphen_values = true)]
        b: Rational,
        #[arg(allow_hyphen_values = true)]
        m: Rational,
        #[arg(allow_hyphen_values = true)]
        n: Rational,
    },
    /// Expand and compare every identity in a polynomial file.
    #[command(name = "poly-id")]
    PolyId { file: PathBuf },
    /// Evaluate a closed-form bound.
    Bounds {
        #[command(subcommand)]
        which: Bound,
    },
}

#[derive(Subcommand)]
enum Bound {
    Corti {
        #[arg(allow_hyphen_values = true)]
        a1: Rational,
        #[arg(allow_hyphen_values = true)]
        a2: Rational,
        eps: Rational,
    },
    Thm2 {
        #[arg(allow_hyphen_values = true)]
        a1: Rational,
        eps: Rational,
    },
    Lct {
        /// Comma-separated exponents, e.g. 2,3
        #[arg(value_delimiter = ',', required = true)]
        exponents: Vec<u64>,
        #[arg(long, value_enum, default_value = "diagonal")]
        form: Form,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Diagonal,
    Product,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn verify(files: &[PathBuf], json: bool) -> ExitCode {
    let mut reports: Vec<RunReport> = Vec::new();
    let mut parse_error = false;
    for f in files {
        match verify_file(f) {
            Ok(r) => {
                if !json {
                    println!("{r}");
                }
                reports.push(r);
            }
            Err(e) => {
                parse_error = true;
                match &e {
                    CertError::Io { .. } => eprintln!("error: {e}"),
                    _ => eprintln!("error: {}:{e}", f.display()),
                }
            }
        }
    }
    if json {
        let out = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])
        } else {
            serde_json::to_string_pretty(&reports)
        };
        println!("{}", out.expect("serializable"));
    }
    if parse_error {
        ExitCode::from(EXIT_USAGE)
    } else if reports.iter().all(|r| r.overall) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

#[derive(Serialize)]
struct IdentityLine {
    line: usize,
    holds: bool,
    witness: Option<Vec<u32>>,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match cli.cmd {
        Cmd::Verify { files } => verify(&files, json),
        Cmd::Ledger { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", file.display())),
            };
            let report = match parse_ledger(&text).and_then(|l| ledger_consistency(&l)) {
                Ok(r) => r,
                Err(e) => return fail(format!("{}:{e}", file.display())),
            };
            emit(json, &report, || report.to_string());
            if report.overall {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Cmd::VertexAb { a, b, m, n } => match vertex_alpha_beta(&a, &b, &m, &n) {
            Ok(out) => {
                let ok = matches!(out, VertexOutcome::Vertex { .. });
                emit(json, &out, || match &out {
                    VertexOutcome::Vertex { alpha, beta } => format!("alpha = {alpha}\nbeta = {beta}"),
                    VertexOutcome::Infeasible(why) => format!("infeasible: {why}"),
                });
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_FAIL)
                }
            }
            Err(e) => fail(e),
        },
        Cmd::PolyId { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", file.display())),
            };
            let results = match check_poly_file(&text) {
                Ok(r) => r,
                Err(e) => return fail(format!("{}:{e}", file.display())),
            };
            let lines: Vec<IdentityLine> = results
                .iter()
                .map(|r| IdentityLine {
                    line: r.line,
                    holds: r.holds(),
                    witness: match &r.result {
                        PolyEquality::Equal => None,
                        PolyEquality::Unequal { witness } => Some(witness.clone()),
                    },
                    text: r.text.clone(),
                })
                .collect();
            let all = lines.iter().all(|l| l.holds);
            emit(json, &lines, || {
                let mut out = String::new();
                for l in &lines {
                    let verdict = if l.holds { "PASS" } else { "FAIL" };
                    out.push_str(&format!("identity line {} {verdict}", l.line));
                    if let Some(w) = &l.witness {
                        out.push_str(&format!(" (differs at exponent {w:?})"));
                    }
                    out.push('\n');
                }
                out.push_str(if all { "overall PASS" } else { "overall FAIL" });
                out
            });
            if all {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Cmd::Bounds { which } => {
            let value: Result<Rational, String> = match which {
                Bound::Corti { a1, a2, eps } => corti_bound(&a1, &a2, &eps).map_err(|e| e.to_string()),
                Bound::Thm2 { a1, eps } => mobile_bound_thmII(&a1, &eps).map(|(b, _)| b).map_err(|e| e.to_string()),
                Bound::Lct { exponents, form } => {
                    let form = match form {
                        Form::Diagonal => MonomialForm::Diagonal,
                        Form::Product => MonomialForm::Product,
                    };
                    lct_monomial(&exponents, form).map_err(|e| e.to_string())
                }
            };
            match value {
                Ok(v) => {
                    emit(json, &v, || v.to_string());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
