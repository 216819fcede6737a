//! Golden tests for the documented command lines. Set `UPDATE_GOLDEN=1` to
//! rewrite the expected outputs.

use std::path::PathBuf;
use std::process::{Command, Output};

use fatdelta_core::fat::FatMorphism;
use serde_json::Value;

const FACTORIZE: &str = r#"{"dom":"mu","cod":"mmu","top":[0,1,3]}"#;

fn fatdelta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fatdelta"))
        .args(args)
        .env_remove("FATDELTA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = fatdelta(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

/// Runs twice and compares both runs with the stored output.
fn golden(name: &str, args: &[&str]) {
    let first = stdout(args);
    assert_eq!(first, stdout(args), "{args:?} is not byte-stable");
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &first).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(first, expected, "{args:?}");
}

#[test]
fn objects_up_to_two_edges() {
    golden("objects.txt", &["objects"]);
    assert_eq!(stdout(&["objects", "--count"]), "7\n");
}

#[test]
fn hom_count() {
    assert_eq!(stdout(&["hom", "u", "um", "--count"]), "3\n");
    assert_eq!(stdout(&["hom", "m", "u", "--count"]), "0\n");
    golden("hom_u_um.txt", &["hom", "u", "um"]);
}

#[test]
fn worked_factorization() {
    let text = stdout(&["factorize", FACTORIZE]);
    assert!(text.starts_with("middle \"muu\"\n"));
    assert!(text.contains("active \"mu\" -> \"muu\" top [0, 1, 3] bottom [0, 2]"));
    assert!(text.contains("inert \"muu\" -> \"mmu\" top [0, 1, 2, 3]"));
    golden("factorize.txt", &["factorize", FACTORIZE]);
    golden("factorize.json", &["--format", "json", "factorize", FACTORIZE]);
}

#[test]
fn json_output_is_versioned_and_reparses() {
    let text = stdout(&["--format", "json", "factorize", FACTORIZE]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["middle"], "muu");
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), text);
}

#[test]
fn poset_export() {
    golden("objects_poset.dot", &["export", "objects-poset", "--format", "dot"]);
    golden("objects_poset.json", &["--format", "json", "export", "objects-poset"]);
    let v: Value = serde_json::from_str(&stdout(&["--format", "json", "export", "objects-poset"])).unwrap();
    assert_eq!(v["result"]["objects"].as_array().unwrap().len(), 7);
    let total: u64 = v["result"]["arrows"].as_array().unwrap().iter().map(|a| a["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 21);
}

#[test]
fn identity_diagram_has_two_equal_columns() {
    let id = r#"{"dom":"mum","cod":"mum","top":[0,1,2,3]}"#;
    let dot = stdout(&["export", "morphism-diagram", id]);
    let column = |prefix: &str| -> Vec<String> {
        dot.lines()
            .map(str::trim)
            .filter(|l| l.starts_with(prefix) && l[1..].starts_with(|c: char| c.is_ascii_digit()))
            .filter(|l| !l.contains("constraint"))
            .map(|l| l[1..].replace(&format!("-> {prefix}"), "-> "))
            .collect()
    };
    assert!(!column("d").is_empty());
    assert_eq!(column("d"), column("c"));
}

#[test]
fn diagram_json_round_trips() {
    let f = r#"{"dom":"u","cod":"mu","top":[1,2]}"#;
    let text = stdout(&["--format", "json", "export", "morphism-diagram", f]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let m: FatMorphism = serde_json::from_value(v["result"]["morphism"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&m).unwrap(), v["result"]["morphism"]);
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), text);
}

#[test]
fn nerve_then_segal_check() {
    golden("nerve_chain.txt", &["nerve", &data("chain.json"), "--bound", "2"]);
    let json = stdout(&["--format", "json", "nerve", &data("chain.json"), "--bound", "3"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    let path = std::env::temp_dir().join(format!("fatdelta-nerve-{}.json", std::process::id()));
    std::fs::write(&path, v["result"].to_string()).unwrap();
    let out = stdout(&["segal-check", path.to_str().unwrap()]);
    assert!(out.starts_with("Segal"), "{out}");
    std::fs::write(&path, &json).unwrap();
    assert_eq!(stdout(&["segal-check", path.to_str().unwrap()]), out);
    // a copy of a triangle with the same faces breaks injectivity
    let mut broken = v["result"].clone();
    let first = broken["sets"]["uu"][0].as_str().unwrap().to_string();
    broken["sets"]["uu"].as_array_mut().unwrap().push("extra".into());
    for action in broken["actions"].as_array_mut().unwrap() {
        if action["morphism"]["cod"] == "uu" {
            let face = action["map"][&first].clone();
            action["map"]["extra"] = face;
        }
    }
    std::fs::write(&path, broken.to_string()).unwrap();
    let out = fatdelta(&["segal-check", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn hypermoment_summary() {
    golden("verify_hypermoment.txt", &["verify", "hypermoment", "--bound", "3"]);
}

#[test]
fn small_verifications_pass() {
    for args in [
        &["verify", "factorization", "--bound", "2"][..],
        &["verify", "phi-psi", "--max-edges", "3"],
        &["verify", "descent", "--max-edges", "2"],
        &["verify", "cartesian", "--bound", "2", "--max-vertices", "2", "--max-edges", "2"],
        &["verify", "cartesian", "--bound", "3", "--graph", &data("loop.json")],
        &["verify", "generic", "--bound", "2", "--max-vertices", "2", "--max-edges", "2"],
        &["verify", "directness", "--bound", "3"],
        &["verify", "contraction", "--bound", "4"],
        &["verify", "nerve", "--max-objects", "1", "--max-morphisms", "2"],
    ] {
        let text = stdout(args);
        assert!(text.lines().all(|l| !l.starts_with("FAIL")), "{args:?}: {text}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(fatdelta(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fatdelta(&["hom", "u"]).status.code(), Some(2));
    assert_eq!(fatdelta(&["objects", "--nope"]).status.code(), Some(2));
    assert_eq!(fatdelta(&["--format", "dot", "objects"]).status.code(), Some(2));

    let out = fatdelta(&["factorize", r#"{"dom":"mu","cod":"u","top":[0,1,2]}"#]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["schema_version"], 1);
    assert_eq!(err["error"]["kind"], "invalid_morphism");

    let out = fatdelta(&["compose", FACTORIZE, FACTORIZE]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "composition_mismatch");

    let out = fatdelta(&["nerve", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_count_from_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_fatdelta"))
            .args(["verify", "directness", "--bound", "2"])
            .env("FATDELTA_THREADS", threads)
            .output()
            .unwrap()
    };
    assert!(run("1").status.success());
    assert_eq!(run("zero").status.code(), Some(2));
    assert_eq!(run("0").status.code(), Some(2));
}

#[test]
fn other_verbs() {
    assert_eq!(stdout(&["vee", "mu", "um"]), "\"muum\"\n");
    assert_eq!(stdout(&["vee", "[1]->[2]:(0 2)", "[1]->[1]:(0 1)"]), "[2]->[3]:(0 2 3)\n");
    assert_eq!(stdout(&["gamma", FACTORIZE]), "2 -> 3 [[0], [1, 2]]\n");
    assert_eq!(stdout(&["gamma", "mum"]), "3\n");
    let g = r#"{"dom":"mu","cod":"muu","top":[0,1,3]}"#;
    let f = r#"{"dom":"u","cod":"mu","top":[1,2]}"#;
    assert_eq!(stdout(&["compose", g, f]), "\"u\" -> \"muu\" top [1, 3] bottom [0, 2]\n");
    golden(
        "pushout.txt",
        &["pushout", r#"{"dom":"u","cod":"mu","top":[1,2]}"#, r#"{"dom":"u","cod":"uu","top":[0,2]}"#],
    );
}
