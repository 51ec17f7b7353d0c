use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use compspec::report::{rounded, ReportDocument};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_compspec"))
}

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn input(name: &str) -> PathBuf {
    manifest().join("inputs").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn compspec")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn analyze(name: &str) -> Value {
    let out = run(&["analyze", path(&input(name)), "--json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    json(&out)
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn golden_reports() {
    for name in ["lollipop", "ppex", "two_cycle", "sqrt_boundary"] {
        let got = analyze(name);
        let text =
            std::fs::read_to_string(manifest().join("tests/golden").join(format!("{name}.json")))
                .unwrap();
        let want: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(rounded(&got, 12), rounded(&want, 12), "{name}");
    }
}

#[test]
fn reported_values() {
    let r = analyze("lollipop");
    assert_eq!(r["essential"], r["full"]);
    assert!((num(&r["essential"][0]["disk"]) - 1.0 / 3.0).abs() < 1e-9);
    assert!((num(&r["essential"][1]["spiral"][0]) - 8.0).abs() < 1e-9);
    assert!((num(&r["essential_norm_sq"]) - 1.0).abs() < 1e-9);

    let r = analyze("ppex");
    assert!((num(&r["rho"]) - 1.0 / 12f64.sqrt()).abs() < 1e-9);
    let mut m: Vec<f64> = r["partition"]["cycles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| num(&c["multiplier"]))
        .collect();
    m.sort_by(f64::total_cmp);
    for (x, want) in m.iter().zip([15.0, 15.0, 144.0]) {
        assert!((x - want).abs() < 1e-8 * want, "{m:?}");
    }

    let r = analyze("two_cycle");
    assert!((num(&r["rho"]) - 1.0 / 5f64.sqrt()).abs() < 1e-9);
    assert!((num(&r["partition"]["cycles"][0]["multiplier"]) - 25.0).abs() < 1e-7);

    let r = analyze("sqrt_boundary");
    assert_eq!(r["certification"]["basis"], "declared");
    assert!((num(&r["essential"][0]["disk"]) - 2f64.sqrt()).abs() < 1e-9);

    let r = analyze("psi2");
    assert!((num(&r["essential_norm_sq"]) - 1.0 / 9.0).abs() < 1e-9);
}

#[test]
fn text_summary_by_default() {
    let out = run(&["analyze", path(&input("lollipop"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("accepted"));
    assert!(text.contains("parabolic"));
}

#[test]
fn inner_symbol_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = run(&[
        "analyze",
        path(&input("inner")),
        "--json",
        "--out",
        path(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["certification"]["accepted"], false);
    assert_eq!(
        r["certification"]["rejection"]["reason"],
        "not in scope: inner symbol"
    );
    assert!(r["essential"].is_null());
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(saved, r);
}

#[test]
fn hard_errors_exit_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("bad.json");
    std::fs::write(
        &doc,
        r#"{"kind": "rational", "num": [[1, 0]], "den": [[1, "x"]]}"#,
    )
    .unwrap();
    let out_path = dir.path().join("report.json");
    let out = run(&["analyze", path(&doc), "--out", path(&out_path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_path.exists());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["reason"], "parse error");
    assert!(err["error"]["detail"]
        .as_str()
        .unwrap()
        .contains("den[0][1]"));

    std::fs::write(
        &doc,
        r#"{"kind": "rational", "num": [[0, 0]], "den": [[0, 0]]}"#,
    )
    .unwrap();
    let out = run(&["analyze", path(&doc), "--out", path(&out_path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_path.exists());

    let out = run(&["analyze", path(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["lemma-check", "--lemma", "bogus"][..],
        &["lemma-check", "--lemma", "rsm", "--trials", "0"],
        &["lemma-check", "--lemma", "rsm", "--n", "40"],
        &["truncate", "x.json", "--order", "0"],
        &["--tol", "-1", "spectrum", "x.json"],
        &["--bogus"],
        &[],
    ] {
        assert_eq!(run(args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn lemma_checks() {
    for args in [
        &[
            "lemma-check",
            "--lemma",
            "rsm",
            "--n",
            "4",
            "--order",
            "16",
            "--trials",
            "200",
            "--seed",
            "7",
        ][..],
        &["lemma-check", "--lemma", "ta", "--n", "2"],
        &[
            "lemma-check",
            "--lemma",
            "fl",
            "--trials",
            "1",
            "--seed",
            "1",
        ],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let s = json(&out);
        assert_eq!(s["passed"], true);
        assert!(s["failures"].as_array().unwrap().is_empty());
    }
}

#[test]
fn lemma_check_is_reproducible() {
    let args = [
        "lemma-check",
        "--lemma",
        "cta",
        "--n",
        "3",
        "--trials",
        "20",
        "--seed",
        "11",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn truncations() {
    let out = run(&["truncate", path(&input("half")), "--order", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let t = json(&out);
    assert_eq!(t["heuristic"], true);
    let eig = t["eigenvalues"].as_array().unwrap();
    assert_eq!(eig.len(), 8);
    for (k, z) in eig.iter().enumerate() {
        assert!((num(&z[0]) - 0.5f64.powi(k as i32)).abs() < 1e-12);
        assert!(num(&z[1]).abs() < 1e-12);
    }
    assert!(t["distances"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| num(d) < 1e-12));

    let t = json(&run(&[
        "truncate",
        path(&input("constant")),
        "--order",
        "5",
    ]));
    let mut moduli: Vec<f64> = t["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|z| num(&z[0]).hypot(num(&z[1])))
        .collect();
    moduli.sort_by(f64::total_cmp);
    assert!((moduli[4] - 1.0).abs() < 1e-12);
    assert!(moduli[..4].iter().all(|m| *m < 1e-12));
}

#[test]
fn spectrum_classify_boundary() {
    let s = json(&run(&["spectrum", path(&input("psi2"))]));
    assert!((num(&s["essential"][0]["disk"]) - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(s["full"][1]["points"][0][0], 1.0);

    let c = json(&run(&["classify", path(&input("lollipop"))]));
    assert_eq!(c["type_class"], "parabolic-non-automorphism");
    assert_eq!(c["denjoy_wolff"]["location"], "boundary");

    let b = json(&run(&["boundary", path(&input("two_cycle"))]));
    assert_eq!(b["contact"].as_array().unwrap().len(), 2);
}

#[test]
fn svg_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    let out = run(&[
        "analyze",
        path(&input("lollipop")),
        "--out",
        path(&report),
        "--svg",
        path(&a),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        run(&["render", path(&report), "--svg", path(&b)])
            .status
            .code(),
        Some(0)
    );
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert_eq!(run(&["render", path(&report)]).stdout, first);
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("<?xml"));
    assert!(text.contains(r#"class="essential""#));
    assert!(text.contains("<polyline"));
}

#[test]
fn report_round_trip() {
    for name in ["lollipop", "ppex", "sqrt_boundary", "inner"] {
        let out = run(&["analyze", path(&input(name)), "--json"]);
        let text = String::from_utf8(out.stdout).unwrap();
        let doc: ReportDocument = serde_json::from_str(&text).unwrap();
        let again: Value = serde_json::to_value(&doc).unwrap();
        assert_eq!(
            again,
            serde_json::from_str::<Value>(&text).unwrap(),
            "{name}"
        );
    }
}
