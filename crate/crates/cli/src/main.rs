//! `conjcert`: reads a JSON problem, runs one library operation, writes JSON.
//!
//! Exit codes: 0 on success (including failed verifications), 1 on
//! malformed input, 2 when the operation itself reports an error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use conjcert::canonical::{cyclic_vector_with, frobenius_form_with, is_cyclic};
use conjcert::csa::{epsilon_sign, hilbert_symbol, local_symbols, theorem_conjugator, verify_csa_certificate, Place};
use conjcert::json::{
    algebra_from_json, csa_certificate_from_json, csa_certificate_to_json, csa_element_from_json,
    element_to_json, field_from_json, frobenius_to_json, involution_from_json, rational_from_json,
    square_matrix_from_json, transpose_certificate_from_json, transpose_certificate_to_json,
    verification_to_json,
};
use conjcert::transpose::{asymmetric_conjugator_with, symmetric_conjugator_with, verify_transpose_certificate};
use conjcert::{Error, Field, Mat, SearchConfig};

#[derive(Parser)]
#[command(name = "conjcert", version, about = "Exact conjugacy certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file (standard input when omitted).
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file (standard output when omitted).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for the randomized search steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Skip random sampling and use the exhaustive fallbacks.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Symmetric g with g a g^-1 = a^T. Input: {"field", "a"}.
    ConjugateTranspose,
    /// Non-symmetric invertible g with g a g^-1 = a^T. Input: {"field", "a"}.
    AsymWitness,
    /// Whether a is cyclic, with a cyclic vector. Input: {"field", "a"}.
    Cyclic,
    /// Invariant factors and transform. Input: {"field", "a"}.
    Frobenius,
    /// Sign of an involution. Input: {"algebra", "involution"}.
    Epsilon,
    /// g with g a g^-1 = theta(a), theta(g) = eps g. Input: {"algebra", "involution", "a"}.
    CsaConjugate,
    /// Hilbert symbols over Q. Input: {"alpha", "beta", optional "place"}.
    Hilbert,
    /// Whether (alpha, beta / Q) is a division algebra. Input: {"alpha", "beta"} or {"algebra"}.
    IsDivision,
    /// Recompute every check of a certificate.
    Verify,
}

enum Failure {
    Malformed(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(msg) => Failure::Malformed(msg),
            other => Failure::Domain(other),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Failure> {
    v.get(key).ok_or_else(|| Failure::Malformed(format!("missing field \"{key}\"")))
}

fn read_matrix(v: &Value) -> Result<Mat, Failure> {
    let field = field_from_json(get(v, "field")?)?;
    Ok(square_matrix_from_json(&field, get(v, "a")?)?)
}

fn place_from_json(v: &Value) -> Result<Place, Failure> {
    let text = match v {
        Value::String(s) => s.trim().to_ascii_lowercase(),
        Value::Number(n) => n.to_string(),
        _ => return Err(Failure::Malformed(format!("bad place {v}"))),
    };
    match text.as_str() {
        "inf" | "infinity" | "oo" => Ok(Place::Infinity),
        t => t
            .parse::<u64>()
            .ok()
            .filter(|p| conjcert::field::is_prime(*p))
            .map(Place::Prime)
            .ok_or_else(|| Failure::Malformed(format!("place must be \"inf\" or a prime, got {v}"))),
    }
}

fn hilbert_parameters(v: &Value) -> Result<(Value, Value), Failure> {
    let src = match v.get("algebra") {
        Some(alg) => {
            let field = field_from_json(get(alg, "field")?)?;
            if field != Field::Rationals {
                return Err(Failure::Domain(Error::UnsupportedField(field.to_string())));
            }
            alg
        }
        None => v,
    };
    Ok((get(src, "alpha")?.clone(), get(src, "beta")?.clone()))
}

fn run(cmd: Command, input: &Value, cfg: &SearchConfig) -> Outcome {
    match cmd {
        Command::ConjugateTranspose => {
            let a = read_matrix(input)?;
            Ok(transpose_certificate_to_json(&symmetric_conjugator_with(&a, cfg)?))
        }
        Command::AsymWitness => {
            let a = read_matrix(input)?;
            Ok(transpose_certificate_to_json(&asymmetric_conjugator_with(&a, cfg)?))
        }
        Command::Cyclic => {
            let a = read_matrix(input)?;
            let cyclic = is_cyclic(&a)?;
            let vector = cyclic_vector_with(&a, cfg)?
                .map_or(Value::Null, |v| Value::Array(v.iter().map(element_to_json).collect()));
            Ok(json!({ "cyclic": cyclic, "cyclic_vector": vector }))
        }
        Command::Frobenius => Ok(frobenius_to_json(&frobenius_form_with(&read_matrix(input)?, cfg)?)),
        Command::Epsilon => {
            let alg = algebra_from_json(get(input, "algebra")?)?;
            let theta = involution_from_json(&alg, get(input, "involution")?)?;
            Ok(json!({
                "epsilon": epsilon_sign(&theta)?.as_i64(),
                "fixed_dimension": theta.fixed_dimension(),
                "reduced_degree": alg.reduced_degree(),
            }))
        }
        Command::CsaConjugate => {
            let alg = algebra_from_json(get(input, "algebra")?)?;
            let theta = involution_from_json(&alg, get(input, "involution")?)?;
            let a = csa_element_from_json(&alg, get(input, "a")?)?;
            Ok(csa_certificate_to_json(&theorem_conjugator(&theta, &a)?))
        }
        Command::Hilbert => {
            let (alpha, beta) = hilbert_parameters(input)?;
            let (alpha, beta) = (rational_from_json(&alpha)?, rational_from_json(&beta)?);
            let mut out = Map::new();
            out.insert("alpha".into(), json!(alpha.to_string()));
            out.insert("beta".into(), json!(beta.to_string()));
            match input.get("place") {
                Some(p) => {
                    let place = place_from_json(p)?;
                    out.insert("place".into(), json!(place.to_string()));
                    out.insert("symbol".into(), json!(hilbert_symbol(&alpha, &beta, place)?));
                }
                None => {
                    let symbols: Map<String, Value> = local_symbols(&alpha, &beta)?
                        .into_iter()
                        .map(|(v, s)| (v.to_string(), json!(s)))
                        .collect();
                    out.insert("symbols".into(), Value::Object(symbols));
                }
            }
            Ok(Value::Object(out))
        }
        Command::IsDivision => {
            let (alpha, beta) = hilbert_parameters(input)?;
            let (alpha, beta) = (rational_from_json(&alpha)?, rational_from_json(&beta)?);
            let ramified: Vec<String> = local_symbols(&alpha, &beta)?
                .into_iter()
                .filter(|&(_, s)| s == -1)
                .map(|(v, _)| v.to_string())
                .collect();
            Ok(json!({ "division": !ramified.is_empty(), "ramified": ramified }))
        }
        Command::Verify => {
            let report = if input.get("involution").is_some() {
                verify_csa_certificate(&csa_certificate_from_json(input)?)
            } else {
                verify_transpose_certificate(&transpose_certificate_from_json(input)?)
            };
            Ok(verification_to_json(&report))
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(s)
        }
    }
}

fn emit(out: Option<&PathBuf>, value: &Value) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = SearchConfig { seed: cli.seed, deterministic: cli.deterministic };

    let parsed = read_input(cli.input.as_ref()).and_then(|text| {
        serde_json::from_str::<Value>(&text).map_err(|e| format!("invalid JSON: {e}"))
    });
    let result = match parsed {
        Ok(input) => run(cli.command, &input, &cfg),
        Err(msg) => Err(Failure::Malformed(msg)),
    };
    let (value, code) = match result {
        Ok(v) => (v, 0),
        Err(Failure::Malformed(msg)) => {
            eprintln!("conjcert: malformed input: {msg}");
            (json!({ "error": "MalformedInput", "detail": msg }), 1)
        }
        Err(Failure::Domain(e)) => (json!({ "error": e.code(), "detail": e.to_string() }), 2),
    };
    if let Err(e) = emit(cli.out.as_ref(), &value) {
        eprintln!("conjcert: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
