//! Command-line front end. Every command prints a JSON envelope
//! `{command, parameters, seed, timestamp, results, witnesses}` except
//! `mollify`, which prints CSV.
//!
//! Exit codes: 0 all checks pass, 1 a property is violated, 2 bad input,
//! 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::compound::build_compound;
use crate::embedding::embed_check;
use crate::error::{Error, Result};
use crate::field::{BuiltinField, ScalarField};
use crate::linalg::{HermitianMatrix, Spectrum, C64};
use crate::mollifier::BallSampler;
use crate::operator::{Builtin, HessianOperator};
use crate::pogorelov::{
    critical_beta, cross_check, mak_closed_form_exponent, mak_smoothness_probe, p_star, PogorelovParams,
};
use crate::sampling::{seeded_rng, sub_seed, DEFAULT_SEED};
use crate::symmetric::{binomial, ksum_multiset, ln_ma_k};
use crate::verify::{certify, Property};

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "HCL_SEED";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hcl", version, about = "Checks for complex Hessian operators and their model examples")]
pub struct Cli {
    /// Random seed; falls back to $HCL_SEED, then to a fixed default.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the derivation matrix D_A of a Hermitian matrix on k-vectors.
    Compound {
        /// Matrix JSON file `{"n": .., "re": [[..]], "im": [[..]]}`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sampled certification of operator inequalities.
    Verify {
        #[arg(long, value_enum)]
        op: OpName,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Interpolation parameter for interp2d.
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        /// Properties to check (comma separated), or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        prop: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Cross-checks for (1 + |z'|²)|z''|^{2β}.
    Pogorelov {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Defaults to the critical value 1 - C(m,k)/C(n,k).
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 1_000)]
        points: usize,
    },
    /// CSV of the averaged difference operator over a sequence of radii.
    Mollify {
        #[arg(long, value_enum)]
        field: FieldName,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.8,0.4,0.2,0.1")]
        eps_list: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Split index for the pogorelov field.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Exponent for the pogorelov field.
        #[arg(long, default_value_t = 0.7)]
        beta: f64,
    },
    /// Real embedding of Hermitian matrices and the Hessian identity.
    EmbedCheck {
        #[arg(long, default_value_t = 1e-4)]
        h: f64,
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpName {
    Det,
    Sigmak,
    Mak,
    Interp2d,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldName {
    Quad,
    Quartic,
    Pogorelov,
    Pluriharmonic,
}

/// What a command produced: a document to print and a pass flag.
struct Outcome {
    body: String,
    passed: bool,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NoConvergence { .. } | Error::NonFinite(_) => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

/// Resolves the seed: flag, then environment, then [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("{SEED_ENV}='{text}' is not an unsigned integer"))),
        None => Ok(DEFAULT_SEED),
    }
}

/// Parses `args` (including the program name), runs the command, writes
/// the report to `out` and diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let env = std::env::var(SEED_ENV).ok();
    let result = resolve_seed(cli.seed, env.as_deref()).and_then(|seed| dispatch(cli.command, seed));
    match result {
        Ok(outcome) => {
            if let Err(e) = out.write_all(outcome.body.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
            if outcome.passed {
                EXIT_PASS
            } else {
                EXIT_VIOLATION
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn envelope(command: &str, parameters: Value, seed: Option<u64>, results: Value, witnesses: Value) -> String {
    let doc = json!({
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "timestamp": timestamp(),
        "results": results,
        "witnesses": witnesses,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("report is valid JSON");
    text.push('\n');
    text
}

fn dispatch(command: Command, seed: u64) -> Result<Outcome> {
    match command {
        Command::Compound { input, k, output } => cmd_compound(&input, k, output.as_deref()),
        Command::Verify {
            op,
            n,
            k,
            s,
            prop,
            samples,
        } => cmd_verify(op, n, k, s, &prop, samples, seed),
        Command::Pogorelov { m, n, k, beta, points } => cmd_pogorelov(m, n, k, beta, points, seed),
        Command::Mollify {
            field,
            n,
            eps_list,
            samples,
            m,
            beta,
        } => cmd_mollify(field, n, &eps_list, samples, m, beta, seed),
        Command::EmbedCheck { h, points } => cmd_embed(h, points, seed),
    }
}

fn cmd_compound(input: &std::path::Path, k: usize, output: Option<&std::path::Path>) -> Result<Outcome> {
    let text = std::fs::read_to_string(input)?;
    let a = HermitianMatrix::from_json(&text)?;
    let d = build_compound(&a, k)?;
    let lambda = a.spectrum()?;
    let sums = Spectrum::from_unsorted(ksum_multiset(lambda.values(), k)?);
    let spectrum_residual = d.body.spectrum()?.distance(&sums);
    let det = d.body.det();
    let det_relative = match ln_ma_k(lambda.values(), k)? {
        // Compare in log space when the product is positive.
        Some(ln) if det > 0.0 => (det.ln() - ln).abs(),
        _ => {
            let mak: f64 = sums.values().iter().product();
            (det - mak).abs() / mak.abs().max(f64::MIN_POSITIVE)
        }
    };
    let spectrum_tol = 1e-8 * (1.0 + a.frobenius_norm());
    let passed = spectrum_residual <= spectrum_tol && det_relative <= 1e-8;
    let results = json!({
        "basis": d.basis.iter().map(|s| s.one_based()).collect::<Vec<_>>(),
        "matrix": d.body.to_file(),
        "ksums": sums.values(),
        "determinant": det,
        "spectrum_residual": spectrum_residual,
        "spectrum_tolerance": spectrum_tol,
        "determinant_relative_residual": det_relative,
    });
    let body = envelope(
        "compound",
        json!({ "input": input.display().to_string(), "k": k, "n": a.dim() }),
        None,
        results,
        json!({}),
    );
    match output {
        Some(path) => {
            std::fs::write(path, &body)?;
            Ok(Outcome {
                body: String::new(),
                passed,
            })
        }
        None => Ok(Outcome { body, passed }),
    }
}

fn builtin(op: OpName, n: Option<usize>, k: Option<usize>, s: f64) -> Result<Builtin> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Error::Input(format!("--{flag} is required")));
    match op {
        OpName::Det => Builtin::determinant(need(n, "n")?),
        OpName::Sigmak => Builtin::sigma_k(need(n, "n")?, need(k, "k")?),
        OpName::Mak => Builtin::ma_k(need(n, "n")?, need(k, "k")?),
        OpName::Interp2d => {
            if n.is_some_and(|n| n != 2) {
                return Err(Error::Input("interp2d is defined for n = 2 only".into()));
            }
            Builtin::interpolated_2d(s)
        }
    }
}

fn cmd_verify(
    op: OpName,
    n: Option<usize>,
    k: Option<usize>,
    s: f64,
    props: &[String],
    samples: usize,
    seed: u64,
) -> Result<Outcome> {
    let op = builtin(op, n, k, s)?;
    let selected: Vec<Property> = if props.iter().any(|p| p == "all") {
        Property::ALL.into_iter().filter(|p| p.applies_to(&op)).collect()
    } else {
        props.iter().map(|p| p.parse()).collect::<Result<_>>()?
    };
    let mut results = Vec::new();
    let mut witnesses = Map::new();
    let mut passed = true;
    for prop in selected {
        let mut c = certify(&op, prop, samples, sub_seed(seed, prop as u64))?;
        passed &= c.passed;
        witnesses.insert(prop.to_string(), std::mem::take(&mut c.witness));
        results.push(json!({
            "property": c.property,
            "samples": c.samples,
            "worst_margin": c.worst_margin,
            "tolerance": c.tolerance,
            "passed": c.passed,
        }));
    }
    let params = json!({
        "op": op.to_string(),
        "n": op.dim(),
        "degree": op.degree(),
        "garding_constant": op.garding_constant(),
        "p_threshold": op.p_threshold(),
        "samples": samples,
    });
    Ok(Outcome {
        body: envelope("verify", params, Some(seed), Value::Array(results), Value::Object(witnesses)),
        passed,
    })
}

fn cmd_pogorelov(m: usize, n: usize, k: usize, beta: Option<f64>, points: usize, seed: u64) -> Result<Outcome> {
    let beta = match beta {
        Some(b) => b,
        None => critical_beta(m, n, k)?,
    };
    let params = PogorelovParams::new(m, n, beta)?;
    let mut rng = seeded_rng(seed);
    let checks = cross_check(&params, points, &mut rng)?;
    let exponent = mak_closed_form_exponent(m, n, k, beta)?;
    let radii = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let zprime = vec![C64::new(0.3, -0.2); m];
    let direction = vec![C64::new(0.6, 0.8); n - m];
    let smooth = mak_smoothness_probe(&params, k, &radii, &zprime, &direction)?;
    let exponent_error = (smooth.fitted_exponent - exponent).abs();
    let exponent_tol = 0.01 * exponent.abs().max(1.0);

    let table: Vec<Value> = (1..n)
        .map(|kk| {
            json!({
                "k": kk,
                "p_star": p_star(n, kk).ok(),
                "p_threshold": n as f64 * (binomial(n, kk) as f64 - 1.0),
                "critical_beta": critical_beta(m, n, kk).ok(),
            })
        })
        .collect();
    let w2p_bound = (beta < 1.0).then(|| (n - m) as f64 / (1.0 - beta));

    let passed = checks.determinant <= 1e-8
        && checks.spectrum <= 1e-8
        && checks.trace <= 1e-10
        && checks.finite_difference <= 1e-5
        && checks.min_eigenvalue > 0.0
        && exponent_error <= exponent_tol;
    let results = json!({
        "beta": beta,
        "critical_beta": critical_beta(m, n, k)?,
        "mak_exponent": exponent,
        "cross_check": checks,
        "smoothness": smooth,
        "exponent_error": exponent_error,
        "exponent_tolerance": exponent_tol,
        "p_star": p_star(n, k).ok(),
        "w2p_upper_bound": w2p_bound,
        "holder_max_alpha": 2.0 * beta - 1.0,
        "thresholds": table,
    });
    Ok(Outcome {
        body: envelope(
            "pogorelov",
            json!({ "m": m, "n": n, "k": k, "beta": beta, "points": points }),
            Some(seed),
            results,
            json!({}),
        ),
        passed,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_mollify(
    field: FieldName,
    n: usize,
    eps_list: &[f64],
    samples: usize,
    m: usize,
    beta: f64,
    seed: u64,
) -> Result<Outcome> {
    let (f, exact): (BuiltinField, Option<f64>) = match field {
        FieldName::Quad => (BuiltinField::SquaredNorm { n }, Some(n as f64)),
        FieldName::Quartic => (BuiltinField::QuarticNorm { n }, None),
        FieldName::Pluriharmonic => (BuiltinField::PluriharmonicQuadratic { n }, Some(0.0)),
        FieldName::Pogorelov => (BuiltinField::Pogorelov(PogorelovParams::new(m, n, beta)?), None),
    };
    if eps_list.is_empty() {
        return Err(Error::Input("--eps-list is empty".into()));
    }
    let z = vec![C64::new(0.5, 0.25); f.dim()];
    let sampler = BallSampler::new(f.dim(), samples, seed)?;
    let mut body = String::from("eps,value,stderr\n");
    let mut passed = true;
    for &eps in eps_list {
        let est = sampler.t_eps(&f, &z, eps)?;
        passed &= est.value >= -3.0 * est.stderr;
        if let Some(x) = exact {
            passed &= (est.value - x).abs() <= 3.0 * est.stderr.max(1e-12);
        }
        body.push_str(&format!("{eps},{},{}\n", est.value, est.stderr));
    }
    Ok(Outcome { body, passed })
}

fn cmd_embed(h: f64, points: usize, seed: u64) -> Result<Outcome> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Input(format!("step h={h} must be positive")));
    }
    let rep = embed_check(h, points, 200, seed)?;
    let passed = rep.worst_hessian_residual <= 1e-4
        && rep.idempotence <= 1e-12
        && rep.commutation <= 1e-12
        && rep.spectrum_doubling <= 1e-10;
    let worst = rep
        .rows
        .iter()
        .max_by(|a, b| a.residual.total_cmp(&b.residual))
        .map(|r| json!({ "field": r.field, "point": r.point, "residual": r.residual }))
        .unwrap_or(Value::Null);
    Ok(Outcome {
        body: envelope(
            "embed-check",
            json!({ "h": h, "points_per_field": points }),
            Some(seed),
            serde_json::to_value(&rep)?,
            json!({ "worst_hessian": worst }),
        ),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(3), Some("9")).unwrap(), 3);
        assert_eq!(resolve_seed(None, Some(" 9 ")).unwrap(), 9);
        assert_eq!(resolve_seed(None, None).unwrap(), DEFAULT_SEED);
        assert!(resolve_seed(None, Some("x")).is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::Input("x".into())), EXIT_INPUT);
        assert_eq!(
            exit_code(&Error::NoConvergence {
                sweeps: 1,
                off_diagonal: 1.0
            }),
            EXIT_NUMERICAL
        );
    }

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn verify_in_process() {
        let (code, out, _) = run_str(&["hcl", "verify", "--op", "det", "--n", "3", "--prop", "garding", "--samples", "50"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], "verify");
        assert!(v["results"][0]["worst_margin"].as_f64().unwrap().abs() < 1e-12);
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(run_str(&["hcl", "verify", "--op", "nope"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["hcl", "verify", "--op", "sigmak", "--n", "3"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["hcl", "verify", "--op", "det", "--n", "3", "--prop", "comparison"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["hcl", "pogorelov", "--m", "3", "--n", "3", "--k", "1"]).0, EXIT_INPUT);
    }
}
