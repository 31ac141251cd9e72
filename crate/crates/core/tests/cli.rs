use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn msw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msw")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn required(schema: &Value, def: Option<&str>) -> Vec<String> {
    let node = match def {
        Some(d) => &schema["$defs"][d],
        None => schema,
    };
    node["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap().to_string()).collect()
}

fn assert_has_keys(v: &Value, keys: &[String]) {
    for k in keys {
        assert!(v.get(k).is_some(), "missing {k} in {v}");
    }
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn construct(dir: &Path, name: &str, n: &str, p: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let out = msw(&["construct", name, "--n", n, "--p", p, "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn wedge_is_primitive() {
    let dir = tempfile::tempdir().unwrap();
    let w = construct(dir.path(), "wedge", "3", "3");
    let out = msw(&["primitivity", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "primitivity");
    assert_eq!(v["result"]["primitive"], true);
    assert_eq!(v["result"]["urk"], 2);
    assert_has_keys(&v, &required(&schema(), None));
}

#[test]
fn theorem_reports_match_schema() {
    let dir = tempfile::tempdir().unwrap();
    let s = schema();
    let keys = required(&s, Some("theoremReport"));
    let sut = construct(dir.path(), "conj-strict-ut", "3", "3");
    let wedge = construct(dir.path(), "wedge", "3", "2");
    for (kind, file) in [("gerstenhaber", &sut), ("generalized", &sut), ("atkinson", &wedge)] {
        let out = msw(&["theorem", kind, file.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_has_keys(&v, &required(&s, None));
        assert_has_keys(&v["result"], &keys);
        assert_eq!(v["result"]["verdict"], "verified");
    }
}

#[test]
fn construct_output_is_a_space_file() {
    let out = msw(&["construct", "strict-ut", "--n", "3", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_has_keys(&v, &required(&schema(), Some("spaceFile")));
    assert_eq!(v["version"], "msw-1");
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_file_points_at_the_entry() {
    let dir = tempfile::tempdir().unwrap();
    let body = "{\"version\": \"msw-1\", \"p\": 3, \"rows\": 1, \"cols\": 2,\n  \"basis\": [[[1, 7]]]}\n";
    let bad = write(dir.path(), "bad.json", body);
    let out = msw(&["props", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    let col = body.lines().nth(1).unwrap().find('7').unwrap() + 1;
    let suffix = format!("bad.json:2:{col}: ");
    assert!(err.contains(&suffix), "{err}");

    let shape = write(dir.path(), "shape.json", "{\"version\": \"msw-1\", \"p\": 3, \"rows\": 1, \"cols\": 2, \"basis\": [[[1]]]}");
    assert_eq!(msw(&["props", shape.to_str().unwrap()]).status.code(), Some(3));
    let syntax = write(dir.path(), "syntax.json", "{\"version\": ");
    assert_eq!(msw(&["props", syntax.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_4() {
    assert_eq!(msw(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(msw(&["props", "/nonexistent/space.json"]).status.code(), Some(4));
    assert_eq!(msw(&["construct", "wedge", "--n", "3", "--p", "4"]).status.code(), Some(4));
    assert_eq!(msw(&["scan", "--n", "2", "--p", "2", "--dim", "1", "--predicate", "nilpotent", "--partition", "9:1"]).status.code(), Some(4));
    assert_eq!(msw(&["--help"]).status.code(), Some(0));
}

#[test]
fn capped_enumeration_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let alt = construct(dir.path(), "altn", "4", "5");
    let out = msw(&["--cap", "10", "props", alt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn quiet_prints_nothing() {
    let out = msw(&["--quiet", "scan", "--n", "2", "--p", "2", "--dim", "1", "--predicate", "nilpotent"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn scan_partitions_add_up() {
    let run = |part: Option<&str>| {
        let mut args = vec!["--json-indent", "0", "scan", "--n", "2", "--p", "3", "--dim", "2", "--predicate", "trivial-spectrum"];
        if let Some(p) = part {
            args.extend(["--partition", p]);
        }
        json(&msw(&args))["result"]["details"].clone()
    };
    let whole = run(None);
    let total = whole["total_spaces"].as_u64().unwrap();
    let cut = (total / 2).to_string();
    let (a, b) = (run(Some(&format!("0:{cut}"))), run(Some(&format!("{cut}:{total}"))));
    assert_eq!(a["hits"].as_u64().unwrap() + b["hits"].as_u64().unwrap(), whole["hits"].as_u64().unwrap());
    assert_eq!(a["scanned"].as_u64().unwrap() + b["scanned"].as_u64().unwrap(), total);
}

#[test]
fn dual_with_explicit_basis_change() {
    let dir = tempfile::tempdir().unwrap();
    let v = construct(dir.path(), "strict-ut", "3", "3");
    let p = write(dir.path(), "p.json", "{\"version\": \"msw-1\", \"p\": 3, \"matrix\": [[1, 1, 0], [0, 1, 0], [0, 0, 2]]}");
    let out = msw(&["dual", v.to_str().unwrap(), "--P", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let singular = write(dir.path(), "s.json", "{\"version\": \"msw-1\", \"p\": 3, \"matrix\": [[1, 1, 0], [1, 1, 0], [0, 0, 2]]}");
    assert_eq!(msw(&["dual", v.to_str().unwrap(), "--P", singular.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn recognize_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let pa = construct(dir.path(), "p-alt", "3", "5");
    let v = json(&msw(&["recognize", "alt", pa.to_str().unwrap()]));
    assert_eq!(v["result"]["result"]["outcome"], "found");
    let c = construct(dir.path(), "conj-strict-ut", "4", "3");
    let v = json(&msw(&["recognize", "strict-ut", c.to_str().unwrap()]));
    assert_eq!(v["result"]["full"], true);
    let tw = construct(dir.path(), "transformed-wedge", "3", "2");
    let v = json(&msw(&["recognize", "wedge", tw.to_str().unwrap(), "--budget", "28224"]));
    assert_eq!(v["result"]["verdict"], "equivalent");
}
