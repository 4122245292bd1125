//! End-to-end CLI tests: exit-code contract, deterministic output, and
//! tolerance overrides via flags and environment.

use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_warpcheck"));
    // Isolate from ambient tolerance overrides.
    for (key, _) in std::env::vars() {
        if key.starts_with("WARPCHECK_TOL_") {
            c.env_remove(key);
        }
    }
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn warpcheck")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn exit_code_matrix() {
    // 0: full verification suite on a scalar-flat rigidity metric.
    let out = run(&["verify", "--metric", "thm1", "--param", "c=1"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // 2: parameter precondition violated (c > 0).
    assert_eq!(code(&run(&["verify", "--metric", "thm1", "--param", "c=-1"])), 2);

    // 1: the product metric fails scalar-flatness but not the identities.
    let out = run(&["verify", "--metric", "cylinder"]);
    assert_eq!(code(&out), 1);
    let body = String::from_utf8_lossy(&out.stdout);
    assert!(body.contains("scalar_flat"));

    // ...and the identity-only suite on the same metric passes.
    assert_eq!(code(&run(&["identities", "--metric", "cylinder"])), 0);

    // 2: quantity/metric domain mismatch.
    assert_eq!(
        code(&run(&["monotone", "--metric", "thm1", "--quantity", "minus"])),
        2
    );

    // 0: monotone quantities on their home charts.
    assert_eq!(
        code(&run(&["monotone", "--metric", "thm1", "--param", "c=1", "--quantity", "plus"])),
        0
    );
    assert_eq!(
        code(&run(&["monotone", "--metric", "thm3", "--quantity", "minus"])),
        0
    );

    // 2: generation domain contains a zero of w.
    assert_eq!(
        code(&run(&["generate", "--c-family", "1", "--domain", "0,2"])),
        2
    );

    // 0: generated metric validates scalar-flat (K = 4 pi, c0 = 1/(4 pi)).
    let out = run(&[
        "generate",
        "--c-family",
        "1",
        "--K",
        "12.566370614359172",
        "--c0",
        "0.0795774715459477",
        "--validate",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // 0: ODE family checks.
    assert_eq!(code(&run(&["ode", "--c-family", "-1"])), 0);

    // 2: malformed inputs.
    assert_eq!(code(&run(&["verify", "--metric", "nosuch"])), 2);
    assert_eq!(code(&run(&["verify", "--metric", "thm1", "--param", "q=1"])), 2);
    assert_eq!(code(&run(&["verify", "--metric", "thm1", "--grid", "4"])), 2);
    assert_eq!(code(&run(&["verify", "--metric", "thm1", "--epsilon", "0.5"])), 2);
    assert_eq!(code(&run(&["verify", "--metric", "thm1", "--param", "c"])), 2);
    assert_eq!(code(&run(&["verify", "--metric", "thm1", "--format", "csv"])), 2);
}

#[test]
fn catalog_lists_entries() {
    let out = run(&["catalog"]);
    assert_eq!(code(&out), 0);
    let body = String::from_utf8_lossy(&out.stdout);
    for name in ["euclidean", "schwarzschild", "thm1", "thm3", "thm3-rcoord", "cylinder", "family"] {
        assert!(body.contains(name), "catalog is missing {name}");
    }
}

#[test]
fn output_is_deterministic() {
    let a = run(&["verify", "--metric", "thm1", "--param", "c=2"]);
    let b = run(&["verify", "--metric", "thm1", "--param", "c=2"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "repeated runs must be byte-identical");

    let a = run(&["monotone", "--metric", "thm1", "--quantity", "plus", "--format", "csv"]);
    let b = run(&["monotone", "--metric", "thm1", "--quantity", "plus", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
    let csv = String::from_utf8_lossy(&a.stdout);
    assert!(csv.starts_with("t,M,dM_dt"), "csv header missing: {csv}");
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let stdout_run = run(&["verify", "--metric", "thm1"]);
    let file_run = bin()
        .args(["verify", "--metric", "thm1", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(code(&file_run), 0);
    let file_body = std::fs::read_to_string(&path).unwrap();
    // stdout adds a trailing newline via println.
    assert_eq!(String::from_utf8_lossy(&stdout_run.stdout).trim_end(), file_body);
}

#[test]
fn tolerance_overrides() {
    // Unknown tolerance name: flag and environment both reject.
    assert_eq!(
        code(&run(&["verify", "--metric", "thm1", "--tol", "nosuch=1e-3"])),
        2
    );
    let out = bin()
        .args(["verify", "--metric", "thm1"])
        .env("WARPCHECK_TOL_NOSUCH", "1e-3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);

    // An absurdly tight monotone tolerance makes the verdict fail (exit 1).
    assert_eq!(
        code(&run(&[
            "monotone", "--metric", "thm1", "--quantity", "plus", "--tol", "monotone=1e-18"
        ])),
        1
    );

    // The same override via the environment...
    let out = bin()
        .args(["monotone", "--metric", "thm1", "--quantity", "plus"])
        .env("WARPCHECK_TOL_MONOTONE", "1e-18")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);

    // ...and the flag wins over the environment.
    let out = bin()
        .args(["monotone", "--metric", "thm1", "--quantity", "plus", "--tol", "monotone=1e-6"])
        .env("WARPCHECK_TOL_MONOTONE", "1e-18")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn json_reports_have_expected_shape() {
    let out = run(&["verify", "--metric", "thm1", "--param", "c=1"]);
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["metric"], "thm1");
    assert_eq!(body["params"]["c"], 1.0);
    assert_eq!(body["verdict"], "pass");
    assert!(body["suite"].as_array().unwrap().len() > 8);

    let out = run(&["monotone", "--metric", "thm1", "--quantity", "plus"]);
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let series = &body["series"];
    assert_eq!(series["quantity"], "plus");
    assert_eq!(series["ts"].as_array().unwrap().len(), 64);
    // Floats are printed in scientific notation with 17 significant digits.
    let raw = String::from_utf8_lossy(&out.stdout);
    assert!(raw.contains("e0") || raw.contains("e-"), "float format: {raw}");
}
