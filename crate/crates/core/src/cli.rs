//! Command-line front end. [`run`] returns captured output and an exit code
//! so the commands can be exercised in-process.
//!
//! Exit codes: 0 success or accepted, 1 verification failure or rejected,
//! 2 usage or parse error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::discriminant::{discriminant_bound, BoundInput};
use crate::error::Error;
use crate::moves::Certificate;
use crate::normalize::{
    build_certificate, check_certificate_with, render_trace, trace_build, CheckMode,
};
use crate::oracle::{self, BoundOptions};
use crate::scheme::{SignVector, TriangularScheme};

pub const SEED_ENV: &str = "SIGNSCHEME_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "signscheme",
    version,
    about = "Sign-vector schemes, rewrite certificates and bound checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the scheme generated by a sign vector.
    Gen {
        /// Comma-separated signs, e.g. `+,+,-,+,-` or `1,-1`.
        #[arg(allow_hyphen_values = true)]
        eps: String,
    },
    /// Build the certificate turning C(eps) into C−.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        eps: String,
        /// Show every step of the construction.
        #[arg(long)]
        trace: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Check a certificate file against a sign vector.
    Check {
        #[arg(allow_hyphen_values = true)]
        eps: String,
        certificate: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Sequential)]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Random samples (per dimension for `bound`, per move for `monotonicity`).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Upper bound on log|d_K| for a totally real primitive field.
    Bound {
        /// Field degree n >= 2.
        n: usize,
        /// Regulator R_K > 0.
        regulator: f64,
        /// Hermite constant of dimension n-1 (required above dimension 8).
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Sequential,
    Initial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lemmas,
    Inequalities,
    Monotonicity,
    Bound,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }

    fn usage(msg: impl ToString) -> Outcome {
        Outcome {
            stdout: String::new(),
            stderr: msg.to_string(),
            code: 2,
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn parse_eps(s: &str) -> Result<SignVector, Outcome> {
    s.parse::<SignVector>().map_err(|e| match e {
        Error::ZeroDimension => Outcome::usage("error: sign vector must not be empty\n"),
        e => Outcome::usage(format!("error: {e}\n")),
    })
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome::usage(text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) | Err(o) => o,
    }
}

fn dispatch(cmd: Command) -> Result<Outcome, Outcome> {
    match cmd {
        Command::Gen { eps } => {
            let eps = parse_eps(&eps)?;
            Ok(Outcome::ok(with_newline(
                TriangularScheme::generate(&eps).to_string(),
            )))
        }
        Command::Normalize { eps, trace, json } => normalize(&parse_eps(&eps)?, trace, json),
        Command::Check {
            eps,
            certificate,
            mode,
            json,
        } => check(&parse_eps(&eps)?, &certificate, mode, json),
        Command::Verify {
            suite,
            n_max,
            samples,
            seed,
            json,
        } => verify(suite, n_max, samples, seed, json),
        Command::Bound {
            n,
            regulator,
            gamma,
            json,
        } => {
            let b = BoundInput::new(n, regulator, gamma)
                .and_then(|i| discriminant_bound(&i))
                .map_err(|e| Outcome::usage(format!("error: {e}\n")))?;
            let text = if json {
                serde_json::to_string_pretty(&b).expect("serializable")
            } else {
                b.to_string()
            };
            Ok(Outcome::ok(with_newline(text)))
        }
    }
}

fn internal(e: Error) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: 1,
    }
}

fn normalize(eps: &SignVector, trace: bool, json: bool) -> Result<Outcome, Outcome> {
    let cert = build_certificate(eps).map_err(internal)?;
    let steps = if trace {
        Some(trace_build(eps).map_err(internal)?)
    } else {
        None
    };
    if json {
        let text = match steps {
            Some(steps) => {
                serde_json::to_string_pretty(&json!({ "certificate": cert, "trace": steps }))
            }
            None => serde_json::to_string_pretty(&cert),
        }
        .expect("serializable");
        return Ok(Outcome::ok(with_newline(text)));
    }
    let mut out = String::new();
    if let Some(steps) = steps {
        out.push_str(&render_trace(eps, &steps));
    }
    if cert.moves.is_empty() {
        out.push_str("already C\u{2212}\n");
    } else {
        let count = cert.moves.len();
        let _ = writeln!(
            out,
            "{count} move{}: {cert}",
            if count == 1 { "" } else { "s" }
        );
    }
    Ok(Outcome::ok(out))
}

fn check(eps: &SignVector, path: &PathBuf, mode: ModeArg, json: bool) -> Result<Outcome, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::usage(format!("error: cannot read {}: {e}\n", path.display())))?;
    let cert =
        Certificate::from_json(&text).map_err(|e| Outcome::usage(format!("error: {e}\n")))?;
    let mode = match mode {
        ModeArg::Sequential => CheckMode::Sequential,
        ModeArg::Initial => CheckMode::Initial,
    };
    let report = check_certificate_with(eps, &cert, mode);
    let body = if json {
        serde_json::to_string_pretty(&report).expect("serializable")
    } else {
        report.to_string()
    };
    Ok(Outcome {
        stdout: with_newline(body),
        stderr: String::new(),
        code: if report.accepted { 0 } else { 1 },
    })
}

fn verify(
    suite: Suite,
    n_max: usize,
    samples: Option<usize>,
    seed: u64,
    json: bool,
) -> Result<Outcome, Outcome> {
    if n_max == 0 {
        return Err(Outcome::usage("error: --n-max must be at least 1\n"));
    }
    let run_all = suite == Suite::All;
    let mut text = String::new();
    let mut doc = serde_json::Map::new();
    let mut failed = false;
    let usage = |e: Error| Outcome::usage(format!("error: {e}\n"));

    if run_all || suite == Suite::Lemmas {
        let r = oracle::verify_lemmas(n_max, seed).map_err(usage)?;
        failed |= !r.violations.is_empty();
        let _ = writeln!(text, "{r}");
        doc.insert(
            "lemmas".into(),
            serde_json::to_value(&r).expect("serializable"),
        );
    }
    if run_all || suite == Suite::Inequalities {
        let r = oracle::verify_inequalities(samples.unwrap_or(100_000), seed).map_err(usage)?;
        failed |= !r.violations.is_empty();
        let _ = writeln!(text, "{r}");
        doc.insert(
            "inequalities".into(),
            serde_json::to_value(&r).expect("serializable"),
        );
    }
    if run_all || suite == Suite::Monotonicity {
        let r = oracle::verify_monotonicity(n_max, samples.unwrap_or(100), seed).map_err(usage)?;
        failed |= !r.violations.is_empty();
        let _ = writeln!(text, "{r}");
        doc.insert(
            "monotonicity".into(),
            serde_json::to_value(&r).expect("serializable"),
        );
    }
    if run_all || suite == Suite::Bound {
        let count = samples.unwrap_or(10_000);
        let opts = BoundOptions {
            samples: count,
            ascent_starts: (count / 100).max(1),
            seed,
        };
        let mut reports = Vec::new();
        for n in 1..=n_max {
            match oracle::verify_bound(n, opts) {
                Ok(r) => {
                    let _ = writeln!(text, "bound: {r}");
                    reports.push(serde_json::to_value(&r).expect("serializable"));
                }
                Err(e @ Error::BoundViolation(_)) => {
                    failed = true;
                    let _ = writeln!(text, "bound: n={n} FAILED: {e}");
                    reports.push(json!({ "n": n, "error": e.to_string() }));
                }
                Err(e) => return Err(usage(e)),
            }
        }
        for n in 1..=n_max.min(3) {
            let r = oracle::grid_max(n, 0.25).map_err(usage)?;
            failed |= !r.within_bound;
            let _ = writeln!(text, "grid:  {r}");
            for p in &r.findings {
                let _ = writeln!(
                    text,
                    "  finding: bound attained at {p:?} outside the candidate family"
                );
            }
            reports.push(serde_json::to_value(&r).expect("serializable"));
        }
        doc.insert("bound".into(), serde_json::Value::Array(reports));
    }
    let _ = writeln!(text, "{}", if failed { "FAIL" } else { "PASS" });
    let stdout = if json {
        doc.insert("passed".into(), json!(!failed));
        doc.insert("seed".into(), json!(seed));
        with_newline(
            serde_json::to_string_pretty(&serde_json::Value::Object(doc)).expect("serializable"),
        )
    } else {
        text
    };
    Ok(Outcome {
        stdout,
        stderr: String::new(),
        code: i32::from(failed),
    })
}
