use std::path::{Path, PathBuf};
use std::process::Command as Process;

use serde_json::Value;

use toricctl::problem::{emit, parse, to_value};
use toricctl::{main_with, Command};

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    assert!(files.len() >= 12);
    files
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let argv = std::iter::once("toricctl").chain(args.iter().copied()).map(String::from);
    let (code, out, err) = main_with(argv, None);
    let v = serde_json::from_str(&out).unwrap_or(Value::Null);
    (code, v, err)
}

fn run_file(command: &str, file: &Path, extra: &[&str]) -> (i32, Value, String) {
    let mut args = vec![command, file.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn vertices_of_the_square() {
    let (code, v, err) = run_file("vertices", &example("square.json"), &[]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["count"], 4);
    let points: Vec<Vec<String>> = v["vertices"].as_array().unwrap().iter().map(|x| strings(&x["point"])).collect();
    let expect = [["1", "0", "0"], ["1", "0", "1"], ["1", "1", "0"], ["1", "1", "1"]];
    assert_eq!(points, expect.map(|p| p.map(String::from).to_vec()).to_vec());
}

#[test]
fn pencil_of_s1s5() {
    let (code, v, _) = run_file("pencil", &example("s1s5_pencil.json"), &[]);
    assert_eq!(code, 0);
    assert_eq!(v["degeneracy_polynomial"], "t2^2");
    assert_eq!(v["lcontact"]["form"], "t2");
    assert_eq!(v["lcontact"]["multiplicity"], 2);
    let (_, v, _) = run_file("pencil", &example("s3s3_pencil.json"), &[]);
    assert_eq!(v["degeneracy_polynomial"], "t1*t2");
    assert!(v["lcontact"].is_null());
}

#[test]
fn delzant_failure_has_witness() {
    let (code, v, err) = run_file("delzant", &example("bad.json"), &[]);
    assert_eq!(code, 2);
    assert_eq!(v["witness"]["face"], serde_json::json!([0, 1]));
    assert_eq!(v["witness"]["snf"], serde_json::json!([1, 2]));
    assert!(err.contains("NotDelzant"));
    let (code, v, _) = run_file("orbifold", &example("bad.json"), &[]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "orbifold");
    assert_eq!(v["faces"][3]["group"], serde_json::json!([2]));
    assert_eq!(v["faces"][0]["set"], serde_json::json!([]));
}

#[test]
fn construct_reports() {
    let (code, v, _) = run_file("construct", &example("s3s3.json"), &[]);
    assert_eq!(code, 0);
    assert_eq!((v["dim_m"].clone(), v["dim_n"].clone(), v["ell"].clone()), (8.into(), 6.into(), 2.into()));
    let half = serde_json::json!(["1/2", "1/2", "1/2", "1/2"]);
    let ls = v["level_sets"].as_array().unwrap().iter().find(|l| l["point"] == half).unwrap();
    assert_eq!(ls["radii_squared"], serde_json::json!(["1", "1", "1", "1"]));
    let (code, v, _) = run_file("construct", &example("orbifold_cone.json"), &[]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "orbifold_only");
    let face = v["faces"].as_array().unwrap().iter().find(|f| f["set"] == serde_json::json!([0, 1])).unwrap();
    assert_eq!(face["orbifold"], serde_json::json!([2]));
    for m in 1..=3 {
        let (code, v, _) = run_file("construct", &example(&format!("simplex{m}.json")), &[]);
        assert_eq!(code, 0);
        assert_eq!((v["ell"].clone(), v["dim_n"].clone()), (1.into(), (2 * m + 1).into()));
        assert_eq!(v["g"], serde_json::json!([vec!["1"; m + 1]]));
    }
    let (_, v, _) = run_file("construct", &example("pentagon.json"), &[]);
    assert_eq!((v["ell"].clone(), v["dim_n"].clone()), (3.into(), 7.into()));
    assert!(strings(&v["positivity"]).iter().all(|x| !x.starts_with('-') && x != "0"));
}

#[test]
fn reslice_and_fatness() {
    let (code, v, _) = run_file("reslice", &example("s3s3.json"), &[]);
    assert_eq!(code, 0);
    assert_eq!(v["faces_preserved"], true);
    let (code, v, _) = run_file("reslice", &example("s3s3.json"), &["--lambda", "1,0"]);
    assert_eq!(code, 2);
    assert!(v["witness"]["reason"].is_string());
    let (code, _, _) = run_file("reslice", &example("s3s3.json"), &["--lambda", "1/2,abc"]);
    assert_eq!(code, 1);

    let (code, v, _) = run_file("fat", &example("quaternionic_pencil.json"), &[]);
    assert_eq!((code, v["fat"].as_str()), (0, Some("yes")));
    let (code, v, _) = run_file("fat", &example("s3s3_pencil.json"), &[]);
    assert_eq!((code, v["fat"].as_str()), (0, Some("no")));
    assert_eq!(v["witness"]["point"], serde_json::json!(["1", "0"]));
}

#[test]
fn roundtrip_names_the_rescaled_facet() {
    let (code, v, _) = run_file("roundtrip", &example("s3s3.json"), &[]);
    assert_eq!((code, v["ok"].clone()), (0, true.into()));
    // rescale label 1 of the input polytope by 2
    let mut p = parse(&std::fs::read_to_string(example("s3s3.json")).unwrap()).unwrap();
    for row in p.l_map.as_mut().unwrap() {
        row[1] = &row[1] * toric_core::exactnum::Rational::from_integer(2.into());
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rescaled.json");
    std::fs::write(&path, emit(&to_value(&p))).unwrap();
    let (code, v, err) = run_file("roundtrip", &path, &[]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(v["ok"], false);
    assert_eq!(v["mismatched_facets"], serde_json::json!([1]));
}

#[test]
fn property_failures_carry_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    // a square pyramid's apex has four active labels
    let pyramid = r#"{"schema": 1, "epsilon": ["1", "0", "0", "0"], "L_map": [
        ["0", "0", "0", "0", "1"], ["1", "0", "-1", "0", "0"], ["0", "1", "0", "-1", "0"],
        ["1", "1", "1", "1", "-1"]]}"#;
    let path = dir.path().join("pyramid.json");
    std::fs::write(&path, pyramid).unwrap();
    let (code, v, _) = run_file("construct", &path, &[]);
    assert_eq!(code, 2);
    assert_eq!(v["failure"], "NotSimple");
    assert_eq!(v["witness"]["active"].as_array().unwrap().len(), 4);
    let (code, v, _) = run_file("faces", &path, &[]);
    assert_eq!((code, v["simple"].clone()), (0, false.into()));
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let p = write("syntax.json", "{\"schema\": 1,\n  \"L_map\": [\n");
    let (code, v, err) = run_file("vertices", &p, &[]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "ParseError");
    assert_eq!(v["error"]["line"], 3);
    assert!(err.starts_with("toricctl: ParseError"));

    let p = write("float.json", r#"{"schema": 1, "L_map": [["1", "0"], ["0", 1]], "epsilon": ["1", "1"]}"#);
    let (code, v, _) = run_file("vertices", &p, &[]);
    assert_eq!((code, v["error"]["path"].as_str()), (1, Some("L_map[1][1]")));

    let p = write("unknown.json", r#"{"schema": 1, "pencil": {"ell": 1, "m": 1, "matrix": []}}"#);
    let (_, v, _) = run_file("pencil", &p, &[]);
    assert_eq!(v["error"]["path"], "pencil.matrix");

    let p = write("version.json", r#"{"schema": 7}"#);
    assert_eq!(run_file("vertices", &p, &[]).0, 1);

    let p = write("index.json", r#"{"schema": 1, "torus": {"dim": 1, "labels": [["1"]]}, "faces": [[0, 1]]}"#);
    let (_, v, _) = run_file("delzant", &p, &[]);
    assert_eq!(v["error"]["path"], "faces[0][1]");

    let p = write("unbounded.json", r#"{"schema": 1, "L_map": [["0", "0"], ["1", "0"], ["0", "1"]], "epsilon": ["1", "0", "0"]}"#);
    let (code, v, _) = run_file("vertices", &p, &[]);
    assert_eq!(code, 1);
    assert!(v["error"]["direction"].is_array());

    assert_eq!(run_file("pencil", &example("square.json"), &[]).0, 1);
    assert_eq!(run(&["frobnicate", "x.json"]).0, 1);
    assert_eq!(run(&["vertices"]).0, 1);
    assert_eq!(run(&["vertices", "/nonexistent/file.json"]).0, 1);
}

#[test]
fn parse_emit_is_identity_on_the_corpus() {
    for f in corpus() {
        let text = std::fs::read_to_string(&f).unwrap();
        let p = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        assert_eq!(emit(&to_value(&p)), text, "{}", f.display());
        assert_eq!(parse(&emit(&to_value(&p))).unwrap(), p);
    }
}

fn assert_no_floats(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "float {n}"),
        Value::Array(a) => a.iter().for_each(assert_no_floats),
        Value::Object(o) => o.values().for_each(assert_no_floats),
        _ => {}
    }
}

#[test]
fn every_command_on_every_file_is_deterministic_and_exact() {
    for f in corpus() {
        for c in Command::ALL {
            for format in ["json", "text"] {
                let args = [c.name(), f.to_str().unwrap(), "--format", format];
                let argv = || std::iter::once("toricctl").chain(args).map(String::from);
                let a = main_with(argv(), None);
                let b = main_with(argv(), None);
                assert_eq!(a, b, "{} {}", c.name(), f.display());
                assert!(matches!(a.0, 0..=2));
                assert_eq!(a.0 == 0, a.2.is_empty(), "stderr carries the message exactly on failure");
                if format == "json" {
                    let v: Value = serde_json::from_str(&a.1).unwrap();
                    assert_eq!(v["exit_code"], a.0);
                    assert_no_floats(&v);
                    if a.0 == 2 {
                        assert!(v.get("witness").is_some(), "{} {}", c.name(), f.display());
                    }
                }
            }
        }
    }
}

#[test]
fn binary_output_is_byte_identical() {
    let bin = env!("CARGO_BIN_EXE_toricctl");
    let f = example("pentagon.json");
    let go = || Process::new(bin).args(["construct", f.to_str().unwrap()]).output().unwrap();
    let (a, b) = (go(), go());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = Process::new(bin).args(["delzant", example("bad.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("NotDelzant"));
}

#[test]
fn max_facets_env() {
    let bin = env!("CARGO_BIN_EXE_toricctl");
    let square = example("square.json");
    let go = |env: &str| {
        Process::new(bin)
            .args(["vertices", square.to_str().unwrap()])
            .env("TORICCTL_MAX_FACETS", env)
            .output()
            .unwrap()
    };
    let out = go("3");
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["error"]["count"].clone(), v["error"]["max"].clone()), (4.into(), 3.into()));
    assert_eq!(go("4").status.code(), Some(0));
    assert_eq!(go("many").status.code(), Some(1));
    assert_eq!(go("21").status.code(), Some(1));
}
