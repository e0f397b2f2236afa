use std::process::{Command, Output};

use serde_json::Value;
use torus_charvar_cli::{dispatch, Payload, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(EXIT_OK),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn terms(poly: &Value) -> Vec<(Vec<u64>, String)> {
    poly["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let e = t["e"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap())
                .collect();
            (e, t["c"].as_str().unwrap().to_owned())
        })
        .collect()
}

fn t(e: [u64; 3], c: &str) -> (Vec<u64>, String) {
    (e.to_vec(), c.to_owned())
}

#[test]
fn q3_is_z_plus_one() {
    let v = json_of(&["families", "q", "--n", "3"]);
    assert_eq!(
        terms(&v["poly"]),
        vec![t([0, 0, 1], "1"), t([0, 0, 0], "1")]
    );
    assert_eq!(v["poly"]["vars"], serde_json::json!(["X", "Y", "Z"]));
}

#[test]
fn q_routes_and_other_families() {
    for route in ["recursive", "via-cyclotomic", "both"] {
        let v = json_of(&["families", "q", "--n", "9", "--route", route]);
        assert_eq!(
            terms(&v["poly"]),
            vec![t([0, 0, 3], "1"), t([0, 0, 1], "-3"), t([0, 0, 0], "1")]
        );
    }
    let p = json_of(&["families", "p", "--n", "2"]);
    assert_eq!(
        terms(&p["poly"]),
        vec![t([0, 0, 2], "1"), t([0, 0, 0], "-2")]
    );
    let g = json_of(&["families", "g", "--n", "6"]);
    assert_eq!(
        terms(&g["poly"]),
        vec![t([0, 0, 2], "1"), t([0, 0, 1], "-1"), t([0, 0, 0], "1")]
    );
}

#[test]
fn closed_form_for_m3() {
    let v = json_of(&["variety", "defining", "--m", "3", "--form", "closed"]);
    // (X^2 - Z - 2)(Z - 1)
    assert_eq!(
        terms(&v["poly"]),
        vec![
            t([2, 0, 1], "1"),
            t([2, 0, 0], "-1"),
            t([0, 0, 2], "-1"),
            t([0, 0, 1], "-1"),
            t([0, 0, 0], "2"),
        ]
    );
}

#[test]
fn defining_forms_agree() {
    for m in (3..=21).step_by(2) {
        let m = m.to_string();
        let outputs: Vec<Vec<u8>> = ["direct", "closed", "trace"]
            .iter()
            .map(|form| run(&["variety", "defining", "--m", &m, "--form", form]).stdout)
            .collect();
        assert_eq!(outputs[0], outputs[1], "m = {m}");
        assert_eq!(outputs[1], outputs[2], "m = {m}");
    }
}

#[test]
fn trace_reduce_commutator() {
    let v = json_of(&["trace", "reduce", "--word", "xyXY"]);
    let mut got = terms(&v["poly"]);
    got.sort();
    let mut want = vec![
        t([1, 1, 1], "-1"),
        t([2, 0, 0], "1"),
        t([0, 2, 0], "1"),
        t([0, 0, 2], "1"),
        t([0, 0, 0], "-2"),
    ];
    want.sort();
    assert_eq!(got, want);
    let v = json_of(&["trace", "reduce", "--word", "xyYx"]);
    assert_eq!(v["reduced"], "xx");
}

#[test]
fn lines_json_and_csv() {
    let v = json_of(&["variety", "lines", "--m", "5"]);
    let lines: Vec<f64> = v["lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_f64().unwrap())
        .collect();
    assert_eq!(lines, vec![-0.61803398875, 1.61803398875]);
    assert_eq!(v["parabola"], "Z=X^2-2");
    let out = run(&["--csv", "variety", "lines", "--m", "5"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "k,z\n1,-0.61803398875\n2,1.61803398875\n"
    );
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["families", "q"][..],
        &["families", "r", "--n", "3"],
        &["families", "p", "--n", "3", "--route", "both"],
        &["variety", "defining", "--m", "4"],
        &["variety", "lines", "--m", "1"],
        &["trace", "reduce", "--word", "xz"],
        &["plot-data", "--m", "3", "--xmin", "1", "--xmax", "0"],
        &["sample", "--m", "6"],
        &["verify", "all", "--fixture", "/nonexistent/fixture.json"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(EXIT_USAGE), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(EXIT_OK));
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &["sample", "--m", "7", "--count", "20", "--seed", "5"][..],
        &["plot-data", "--m", "9", "--samples", "11"],
        &["verify", "families", "--max-n", "30"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn sample_report_shape() {
    let v = json_of(&[
        "sample",
        "--m",
        "5",
        "--count",
        "3",
        "--seed",
        "10",
        "--kind",
        "irreducible",
    ]);
    assert_eq!(v["passed"], true);
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 3);
    let seeds: Vec<u64> = samples
        .iter()
        .map(|s| s["seed"].as_u64().unwrap())
        .collect();
    assert_eq!(seeds, vec![10, 11, 12]);
    let keys: Vec<&str> = samples[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    assert_eq!(
        &keys[..8],
        [
            "m",
            "kind",
            "seed",
            "X",
            "Z",
            "residual_defining",
            "residual_relation",
            "nearest_line"
        ]
    );
    assert_eq!(samples[0]["kind"], "irreducible_candidate");
}

#[test]
fn sample_csv() {
    let out = run(&[
        "--csv", "sample", "--m", "3", "--count", "2", "--kind", "abelian",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("m,kind,seed,"));
    assert!(rows[1].starts_with("3,abelian,0,"));
}

#[test]
fn plot_data_csv() {
    let out = run(&[
        "plot-data",
        "--m",
        "3",
        "--xmin",
        "-2",
        "--xmax",
        "2",
        "--samples",
        "3",
        "--csv",
    ]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "component,x,z\nparabola,-2,2\nparabola,0,-2\nparabola,2,2\nline,-2,1\nline,2,1\n"
    );
}

#[test]
fn verify_small_ranges_in_process() {
    let r = dispatch(["charvar", "verify", "all", "--max-m", "15", "--max-n", "40"]);
    assert_eq!(r.exit_code, EXIT_OK);
    let Payload::Json(v) = r.payload else {
        panic!("expected JSON")
    };
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 10);
}

#[test]
fn fixture_override_fails_verification() {
    let path =
        std::env::temp_dir().join(format!("charvar-cli-fixture-{}.json", std::process::id()));
    std::fs::write(
        &path,
        r#"{"q":{"7":{"vars":["X","Y","Z"],"terms":[{"e":[0,0,3],"c":"1"},{"e":[0,0,2],"c":"1"},{"e":[0,0,1],"c":"-2"},{"e":[0,0,0],"c":"-2"}]}}}"#,
    )
    .unwrap();
    let r = dispatch([
        "charvar",
        "--csv",
        "verify",
        "families",
        "--max-n",
        "20",
        "--fixture",
        path.to_str().unwrap(),
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(r.exit_code, EXIT_FAILED);
    let Payload::Csv(text) = r.payload else {
        panic!("expected CSV")
    };
    assert!(text.contains("pn_factorization,1,20,false,7"), "{text}");
}
