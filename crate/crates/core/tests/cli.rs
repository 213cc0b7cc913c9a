use std::fs;
use std::process::Command;

use signscheme::cli::{run, Outcome};
use signscheme::{build_certificate, Certificate, Move};

const WORKED: &str = "+,-,+,+,-,+,+";

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("signscheme").chain(args.iter().copied()))
}

fn golden(name: &str) -> String {
    fs::read_to_string(format!(
        "{}/tests/golden/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap()
}

#[test]
fn gen_renders_tableau() {
    let out = cli(&["gen", "+,+,-,+,-"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, golden("gen_example.txt"));
    assert_eq!(cli(&["gen", "-"]).stdout, "\u{2212}\n");
    assert_eq!(cli(&["gen", "1,-1"]).stdout, cli(&["gen", "+,-"]).stdout);
}

#[test]
fn gen_usage_errors() {
    assert_eq!(cli(&["gen", ""]).code, 2);
    assert_eq!(cli(&["gen"]).code, 2);
    assert_eq!(cli(&["gen", "+,x"]).code, 2);
}

#[test]
fn normalize_outputs() {
    let out = cli(&["normalize", WORKED, "--trace"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.trim_end().ends_with(
        "6 moves: {Horizontal(1;1,2), Square(2,3;3,6), Square(1,4;4,5), Vertical(5,6;6), Vertical(4,7;7), Point(1;7)}"
    ));
    assert!(out
        .stdout
        .contains("L(3) = {Horizontal(1;1,2), Vertical(2,3;3)}"));
    assert_eq!(cli(&["normalize", "-,-,-"]).stdout, "already C\u{2212}\n");
    assert_eq!(cli(&["normalize", "+"]).stdout, "1 move: {Point(1;1)}\n");
}

#[test]
fn normalize_json_is_byte_stable() {
    let out = cli(&["normalize", WORKED, "--json"]);
    assert_eq!(out.stdout, golden("worked_certificate.json"));
    let cert = Certificate::from_json(&out.stdout).unwrap();
    assert_eq!(cert, build_certificate(&WORKED.parse().unwrap()).unwrap());

    let traced: serde_json::Value =
        serde_json::from_str(&cli(&["normalize", WORKED, "--trace", "--json"]).stdout).unwrap();
    let steps = traced["trace"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["level"], 7);
    assert_eq!(steps.last().unwrap()["action"]["type"], "level_complete");
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, golden("worked_certificate.json")).unwrap();
    let out = cli(&["check", WORKED, good.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.ends_with("ACCEPTED\n"));
    assert_eq!(
        cli(&["check", WORKED, good.to_str().unwrap(), "--mode", "initial"]).code,
        0
    );

    let mut cert = Certificate::from_json(&golden("worked_certificate.json")).unwrap();
    cert.moves.retain(|m| *m != Move::point(1, 7));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, cert.to_json()).unwrap();
    let out = cli(&["check", WORKED, bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("(1,7)"));

    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{ not json").unwrap();
    let out = cli(&["check", WORKED, junk.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("parse error"));

    assert_eq!(
        cli(&[
            "check",
            WORKED,
            dir.path().join("missing.json").to_str().unwrap()
        ])
        .code,
        2
    );
}

#[test]
fn verify_suites() {
    let out = cli(&[
        "verify",
        "--suite",
        "bound",
        "--n-max",
        "10",
        "--samples",
        "5000",
        "--seed",
        "1",
    ]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("n=10 bound=32 best=32"));
    let out = cli(&["verify", "--suite", "lemmas", "--n-max", "10"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("2046 vectors"));
    assert!(out.stdout.contains("0 violations"));
    let out = cli(&["verify", "--suite", "all", "--n-max", "1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.ends_with("PASS\n"));
    assert_eq!(cli(&["verify", "--n-max", "0"]).code, 2);
    assert_eq!(cli(&["verify", "--suite", "nope"]).code, 2);
}

#[test]
fn verify_is_reproducible() {
    let args = [
        "verify",
        "--suite",
        "all",
        "--n-max",
        "4",
        "--samples",
        "500",
        "--seed",
        "11",
        "--json",
    ];
    let a = cli(&args);
    assert_eq!(a, cli(&args));
    let doc: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["seed"], 11);
}

#[test]
fn bound_command() {
    let out = cli(&["bound", "2", "1", "--gamma", "1", "--json"]);
    assert_eq!(out.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!((doc["bound"].as_f64().unwrap() - (2.0 + 4f64.ln())).abs() < 1e-12);
    let text = cli(&["bound", "3", "1"]).stdout;
    assert!(text.contains("totally real primitive"));
    assert!(text.contains("built-in table"));
    assert_eq!(cli(&["bound", "10", "1"]).code, 2);
    assert_eq!(cli(&["bound", "10", "1", "--gamma", "2.2"]).code, 0);
    assert_eq!(cli(&["bound", "3", "-1"]).code, 2);
    assert_eq!(cli(&["bound", "1", "1"]).code, 2);
}

#[test]
fn binary_exit_status_and_seed_env() {
    let exe = env!("CARGO_BIN_EXE_signscheme");
    let out = Command::new(exe).args(["gen", "-,-"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "\u{2212} +\n  \u{2212}\n"
    );
    let out = Command::new(exe).args(["gen", ""]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let with_env = Command::new(exe)
        .args([
            "verify",
            "--suite",
            "bound",
            "--n-max",
            "3",
            "--samples",
            "300",
            "--json",
        ])
        .env("SIGNSCHEME_SEED", "42")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&with_env.stdout).unwrap();
    assert_eq!(doc["seed"], 42);
    let overridden = Command::new(exe)
        .args([
            "verify",
            "--suite",
            "bound",
            "--n-max",
            "3",
            "--samples",
            "300",
            "--json",
            "--seed",
            "7",
        ])
        .env("SIGNSCHEME_SEED", "42")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!(doc["seed"], 7);
}
