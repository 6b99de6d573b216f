use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], input: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_conjcert"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn conjcert");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn run_json(args: &[&str], input: &Value) -> (i32, Value) {
    let (code, out) = run(args, &input.to_string());
    (code, serde_json::from_str(&out).expect("output is JSON"))
}

fn rot() -> Value {
    json!({ "field": "Q", "a": [["0", "-1"], ["1", "0"]] })
}

fn assert_verifies(cert: &Value) {
    let (code, report) = run_json(&["verify"], cert);
    assert_eq!(code, 0);
    assert_eq!(report, json!({ "valid": true, "reasons": [] }), "{cert}");
}

#[test]
fn cyclic_companion() {
    let (code, out) = run_json(&["cyclic"], &rot());
    assert_eq!(code, 0);
    assert_eq!(out["cyclic"], json!(true));
    let (_, out) = run_json(&["cyclic"], &json!({ "field": "Q", "a": [["1", "0"], ["0", "1"]] }));
    assert_eq!(out, json!({ "cyclic": false, "cyclic_vector": null }));
}

#[test]
fn asym_witness_on_cyclic_input() {
    let (code, out) = run_json(&["asym-witness"], &rot());
    assert_eq!(code, 2);
    assert_eq!(out["error"], json!("CyclicInput"));
}

#[test]
fn transpose_certificates_round_trip() {
    let inputs = [
        (vec!["conjugate-transpose"], rot()),
        (vec!["conjugate-transpose"], json!({ "field": "Q", "a": [["1", "2", "0"], ["0", "1", "1/2"], ["3", "0", "0"]] })),
        (vec!["conjugate-transpose"], json!({ "field": {"p": 3}, "a": [[1, 1, 0], [0, 1, 0], [0, 0, 1]] })),
        (vec!["asym-witness"], json!({ "field": "Q", "a": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "2"]] })),
        (vec!["asym-witness"], json!({ "field": {"p": 2}, "a": [[1, 0], [0, 1]] })),
        (vec!["asym-witness", "--deterministic"], json!({ "field": {"p": 3}, "a": [[2, 0, 0], [0, 2, 0], [0, 0, 1]] })),
    ];
    for (args, input) in inputs {
        let (code, cert) = run_json(&args, &input);
        assert_eq!(code, 0, "{cert}");
        assert_eq!(cert["checks"]["conjugates"], json!(true));
        assert_verifies(&cert);
    }
}

#[test]
fn expected_symmetric_conjugator() {
    let (_, cert) = run_json(&["conjugate-transpose"], &json!({ "field": "Q", "a": [["1", "1"], ["0", "1"]] }));
    assert_eq!(cert["g"], json!([["0", "1"], ["1", "0"]]));
    assert_eq!(cert["symmetric"], json!(true));
}

#[test]
fn tampered_certificate_is_reported() {
    let (_, mut cert) = run_json(&["conjugate-transpose"], &rot());
    cert["symmetric"] = json!(false);
    let (code, report) = run_json(&["verify"], &cert);
    assert_eq!(code, 0);
    assert_eq!(report["valid"], json!(false));
    assert!(!report["reasons"].as_array().unwrap().is_empty());

    cert["symmetric"] = json!(true);
    cert["g"] = json!([["1", "1"], ["1", "1"]]);
    let (code, report) = run_json(&["verify"], &cert);
    assert_eq!(code, 0);
    assert_eq!(report["valid"], json!(false));
}

#[test]
fn csa_certificates() {
    let d = json!({ "field": "Q", "n": 1, "alpha": "-1", "beta": "-1" });
    let input = json!({
        "algebra": d,
        "involution": { "base": "gamma-transpose", "twist": null },
        "a": ["0", "1", "0", "0"],
    });
    let (code, cert) = run_json(&["csa-conjugate"], &input);
    assert_eq!(code, 0);
    assert_eq!(cert["g"], json!([[["0", "0", "1", "0"]]]));
    assert_eq!(cert["epsilon"], json!(-1));
    assert_verifies(&cert);

    let twisted = json!({
        "algebra": { "field": "Q", "n": 2, "alpha": "-1", "beta": "-1" },
        "involution": {
            "base": "gamma-transpose",
            "twist": [[["0", "1", "0", "0"], ["0", "0", "0", "0"]], [["0", "0", "0", "0"], ["0", "1", "0", "0"]]],
        },
        "a": [[["1", "2", "0", "0"], ["0", "0", "1", "0"]], [["3", "0", "0", "1/2"], ["0", "1", "1", "1"]]],
    });
    let (code, mut cert) = run_json(&["csa-conjugate"], &twisted);
    assert_eq!(code, 0, "{cert}");
    assert_eq!(cert["epsilon"], json!(1));
    assert_verifies(&cert);

    cert["epsilon"] = json!(-1);
    let (_, report) = run_json(&["verify"], &cert);
    assert_eq!(report["valid"], json!(false));
}

#[test]
fn csa_conjugate_rejects_finite_fields() {
    let input = json!({
        "algebra": { "field": {"p": 5}, "n": 2 },
        "involution": { "base": "transpose", "twist": null },
        "a": [[1, 2], [3, 4]],
    });
    let (code, out) = run_json(&["csa-conjugate"], &input);
    assert_eq!(code, 2);
    assert_eq!(out["error"], json!("UnsupportedField"));
}

#[test]
fn epsilon_and_bad_twist() {
    let alg = json!({ "field": "Q", "n": 2 });
    let (code, out) = run_json(
        &["epsilon"],
        &json!({ "algebra": alg, "involution": { "base": "transpose", "twist": [["1", "0"], ["0", "2"]] } }),
    );
    assert_eq!((code, out["epsilon"].clone()), (0, json!(1)));
    let (code, out) = run_json(
        &["epsilon"],
        &json!({ "algebra": alg, "involution": { "base": "transpose", "twist": [["1", "1"], ["0", "1"]] } }),
    );
    assert_eq!((code, out["error"].clone()), (2, json!("BadTwist")));
}

#[test]
fn hilbert_and_division() {
    let (code, out) = run_json(&["hilbert"], &json!({ "alpha": "-1", "beta": "-1", "place": 2 }));
    assert_eq!((code, out["symbol"].clone()), (0, json!(-1)));
    let (_, out) = run_json(&["hilbert"], &json!({ "alpha": "1", "beta": "7", "place": "inf" }));
    assert_eq!(out["symbol"], json!(1));
    let (_, out) = run_json(&["is-division"], &json!({ "algebra": { "field": "Q", "alpha": "-1", "beta": "-1" } }));
    assert_eq!(out["division"], json!(true));
    let (_, out) = run_json(&["is-division"], &json!({ "alpha": "2", "beta": "-1" }));
    assert_eq!(out, json!({ "division": false, "ramified": [] }));
    let (code, out) = run_json(&["hilbert"], &json!({ "alpha": "0", "beta": "1" }));
    assert_eq!(code, 2, "{out}");
}

#[test]
fn malformed_input_exits_one() {
    for bad in [
        "{",
        "[]",
        "not json",
        r#"{"field": "Q"}"#,
        r#"{"field": "Q", "a": [["1", "2"]]}"#,
        r#"{"field": "Q", "a": [["1", "x"], ["0", "1"]]}"#,
        r#"{"field": "Q", "a": [["1/0"]]}"#,
        r#"{"field": "R", "a": [["1"]]}"#,
    ] {
        let (code, out) = run(&["cyclic"], bad);
        assert_eq!(code, 1, "{bad} -> {out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"], json!("MalformedInput"));
    }
    let (code, _) = run(&["verify"], r#"{"field": "Q"}"#);
    assert_eq!(code, 1);
}

#[test]
fn output_is_deterministic() {
    let input = json!({ "field": {"p": 3}, "a": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 1], [0, 0, 0, 2]] }).to_string();
    for cmd in ["conjugate-transpose", "asym-witness", "frobenius"] {
        let first = run(&[cmd, "--seed", "42"], &input);
        let second = run(&[cmd, "--seed", "42"], &input);
        assert_eq!(first.0, 0);
        assert_eq!(first, second);
    }
}

#[test]
fn file_arguments() {
    let dir = std::env::temp_dir().join(format!("conjcert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("in.json");
    let output = dir.join("out.json");
    std::fs::write(&input, rot().to_string()).unwrap();
    let (code, stdout) = run(
        &["frobenius", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()],
        "",
    );
    assert_eq!((code, stdout.as_str()), (0, ""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["invariant_factors"], json!([["1", "0", "1"]]));
    let (code, _) = run(&["cyclic", "--in", dir.join("missing.json").to_str().unwrap()], "");
    assert_eq!(code, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
