#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use covham_cli::RunResult;

pub const OSCILLATOR: &str = "tests/problems/oscillator.ini";
pub const SCALAR_FIELD: &str = "tests/problems/scalar_field_2d.ini";

pub const OSCILLATOR_CASES: &[&[&str]] = &[
    &["hamilton-eqs"],
    &["evolve", "--function", "y"],
    &["evolve", "--function", "x", "--via", "connection"],
    &[
        "evolve",
        "--function",
        "y^2",
        "--via",
        "vertical-bracket",
        "--via",
        "rho-bracket",
    ],
    &["evolve", "--function", "pp"],
    &["evolve", "--function", "y +"],
    &["bracket", "--kind", "vertical", "--f", "p_y", "--g", "y"],
    &[
        "bracket", "--kind", "vertical", "--f", "y^2*p_y", "--g", "x",
    ],
    &[
        "bracket",
        "--kind",
        "canonical",
        "--f",
        "pp + (p_y^2 + y^2)/2",
        "--g",
        "y",
    ],
    &["bracket", "--kind", "vertical", "--f", "pp", "--g", "y"],
    &["check-global"],
    &["check-global", "--object", "hamiltonian"],
    &["check-global", "--object", "evolution-form"],
    &["check-global", "--object", "bracket-split"],
    &["check-global", "--object", "unit-density"],
    &["check-global", "--object", "energy-function"],
    &["forms"],
    &["legendre"],
    &["frobnicate"],
];

pub const SCALAR_FIELD_CASES: &[&[&str]] = &[
    &["hamilton-eqs"],
    &["evolve", "--function", "y"],
    &["evolve", "--function", "mom(y,x0)"],
    &["evolve", "--function", "y", "--via", "vertical-bracket"],
    &[
        "bracket",
        "--kind",
        "vertical",
        "--f",
        "mom(y,x0)",
        "--g",
        "y",
    ],
    &["check-global"],
    &["check-global", "--object", "unit-density"],
    &["forms"],
    &["legendre"],
];

pub fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(name)
}

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Run the built binary from the crate directory so problem paths stay
/// relative in the output.
pub fn covham(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_covham"))
        .args(args)
        .current_dir(manifest_dir())
        .output()
        .expect("covham runs");
    Run {
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
        code: out.status.code().expect("exit code"),
    }
}

fn shell_word(s: &str) -> String {
    if s.chars()
        .all(|c| c.is_ascii_alphanumeric() || "-_./^".contains(c))
    {
        s.to_string()
    } else {
        format!("'{s}'")
    }
}

fn record(out: &mut String, args: &[&str]) -> Run {
    let words: Vec<String> = args.iter().map(|a| shell_word(a)).collect();
    out.push_str(&format!("$ covham {}\n", words.join(" ")));
    let run = covham(args);
    out.push_str(&run.stdout);
    out.push_str(&run.stderr);
    out.push_str(&format!("[exit {}]\n\n", run.code));
    run
}

/// Plain output of every case, followed by the JSON output of the ones that
/// succeed.
pub fn transcript(problem: &str, cases: &[&[&str]]) -> String {
    let mut out = String::new();
    let mut ok = Vec::new();
    for case in cases {
        let mut args = vec!["--spec", problem];
        args.extend_from_slice(case);
        if record(&mut out, &args).code == 0 {
            ok.push(args);
        }
    }
    for mut args in ok {
        args.insert(0, "--json");
        record(&mut out, &args);
    }
    out
}

/// Cases whose JSON output does not re-render to the plain output.
pub fn json_mismatches(problem: &str, cases: &[&[&str]]) -> Vec<String> {
    let mut bad = Vec::new();
    for case in cases {
        let mut args = vec!["--spec", problem];
        args.extend_from_slice(case);
        let plain = covham(&args);
        if plain.code != 0 {
            continue;
        }
        args.insert(0, "--json");
        let json = covham(&args);
        match RunResult::from_json(&json.stdout) {
            Ok(r) if r.render() == plain.stdout => {}
            _ => bad.push(case.join(" ")),
        }
    }
    bad
}

/// Compare against the stored transcript; `UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        return Ok(());
    }
    let line = expected
        .lines()
        .zip(actual.lines())
        .position(|(a, b)| a != b)
        .unwrap_or_else(|| expected.lines().count().min(actual.lines().count()))
        + 1;
    Err(format!(
        "{name} differs from the golden transcript at line {line}"
    ))
}
