#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixture(name: &str) -> String {
    manifest_path(&["tests", "fixtures", name])
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(manifest_path(&["tests", "golden", name]))
}

fn manifest_path(parts: &[&str]) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    for part in parts {
        p.push(part);
    }
    p.to_string_lossy().into_owned()
}

/// Golden file name and the CLI arguments (after the program name) producing it.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let f = fixture;
    let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        ("check_worked.json", owned(&["check", &f("worked.json")])),
        ("gr_worked.json", owned(&["gr", &f("worked.json")])),
        (
            "limit_worked.json",
            owned(&["limit", "--weights=1,0,-1", &f("worked.json")]),
        ),
        ("weight_worked.json", owned(&["weight", &f("worked_lambda.json")])),
        (
            "fiber_plus_f2.json",
            owned(&["fiber", "--field", "fp:2", "--case", "plus"]),
        ),
        (
            "fiber_plus_f3.json",
            owned(&["fiber", "--field", "fp:3", "--case", "plus"]),
        ),
        (
            "fiber_alternating_f2.json",
            owned(&["fiber", "--field", "fp:2", "--case", "alternating"]),
        ),
        (
            "fiber_alternating_f3.json",
            owned(&["fiber", "--field", "fp:3", "--case", "alternating"]),
        ),
        (
            "fiber_unramified_f2.json",
            owned(&["fiber", "--field", "fp:2", "--case", "unramified"]),
        ),
        (
            "fiber_unramified_f3.json",
            owned(&["fiber", "--field", "fp:3", "--case", "unramified"]),
        ),
        ("pfaffian_j2.json", owned(&["pfaffian", &f("j2.json")])),
        ("pfaffian_types.json", owned(&["pfaffian", &f("types.json")])),
    ]
}

pub fn run_cli(args: &[String]) -> sigmagit::cli::Outcome {
    let mut full = vec!["sigmagit".to_string()];
    full.extend(args.iter().cloned());
    sigmagit::cli::run(full)
}
