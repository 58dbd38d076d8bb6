use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn thx(args: &[&str]) -> Output {
    thx_env(args, &[])
}

fn thx_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_thx"));
    cmd.args(args).env_remove("THX_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("thx runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn emit(dir: &TempDir, name: &str) -> String {
    let path = dir.path().join(format!("{name}.json"));
    let p = path.to_str().unwrap().to_string();
    assert_eq!(code(&thx(&["catalog", "emit", name, &p])), 0);
    p
}

const NAMES: [&str; 6] = [
    "abelian",
    "crossed_module_aff1",
    "heisenberg_leibniz",
    "sl2_adjoint_crossed",
    "sl2_fundamental_nilpotent",
    "filiform_leibniz3",
];

#[test]
fn catalog_lists_every_triple() {
    let out = stdout(&thx(&["catalog", "list"]));
    for n in NAMES {
        assert!(out.contains(n), "{n} missing from\n{out}");
    }
}

#[test]
fn show_matches_the_committed_fixture() {
    let out = thx(&["catalog", "show", "heisenberg_leibniz"]);
    assert_eq!(stdout(&out), fs::read_to_string(data("heisenberg_leibniz.json")).unwrap());
}

#[test]
fn unknown_catalog_name_is_rejected() {
    let out = thx(&["catalog", "show", "nope"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("unknown catalog triple"));
}

#[test]
fn emitted_triples_validate() {
    let dir = TempDir::new().unwrap();
    for n in NAMES {
        let p = emit(&dir, n);
        let out = thx(&["validate", &p]);
        assert_eq!(code(&out), 0, "{n}: {}", stdout(&out));
        assert!(stdout(&out).contains("valid Lie-Leibniz triple"));
    }
}

#[test]
fn classify_crossed_module() {
    let dir = TempDir::new().unwrap();
    let out = stdout(&thx(&["classify", &emit(&dir, "crossed_module_aff1")]));
    for flag in ["lie_V", "strict", "semistrict", "stringent", "crossed"] {
        assert!(out.lines().any(|l| l.starts_with(flag) && l.ends_with("yes")), "{flag}\n{out}");
    }
    assert!(out.contains("dim R_Θ     1"));
}

#[test]
fn classify_heisenberg() {
    let out = stdout(&thx(&["classify", data("heisenberg_leibniz.json").to_str().unwrap()]));
    let flag = |f: &str| out.lines().find(|l| l.split_whitespace().next() == Some(f)).unwrap().to_string();
    assert!(flag("lie_V").ends_with("no"));
    assert!(flag("strict").ends_with("yes"));
    assert!(flag("stringent").ends_with("yes"));
    assert!(out.contains("dim I       1"));
}

#[test]
fn zero_denominator_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    let text = fs::read_to_string(data("heisenberg_leibniz.json")).unwrap().replacen("\"1\"", "\"1/0\"", 1);
    fs::write(&p, text).unwrap();
    let out = thx(&["validate", p.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let err = stderr(&out);
    assert!(err.contains("1/0") && err.contains("line"), "{err}");
}

#[test]
fn truncated_json_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("cut.json");
    fs::write(&p, "{\"field\": \"rational\", \"g\": {").unwrap();
    assert_eq!(code(&thx(&["classify", p.to_str().unwrap()])), 3);
}

#[test]
fn quadratic_constraint_violation_exits_two() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("violation.json");
    let text = r#"{
      "field": "rational",
      "g": {"dim": 1, "brackets": [[["0"]]]},
      "v": {"dim": 2},
      "rho": [[["0", "0"], ["1", "0"]]],
      "theta": [["1", "1"]]
    }"#;
    fs::write(&p, text).unwrap();
    let out = thx(&["validate", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(code(&thx(&["frobnicate"])), 3);
    assert_eq!(code(&thx(&["build"])), 3);
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = thx_env(&["catalog", "list"], &[("THX_THREADS", "zero")]);
    assert_eq!(code(&out), 3);
}

#[test]
fn heisenberg_build_matches_golden_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("h.json");
    let src = data("heisenberg_leibniz.json");
    let run = thx(&["build", src.to_str().unwrap(), "--max-degree", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    let golden = fs::read_to_string(data("heisenberg_leibniz.n4.json")).unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap(), golden);
}

#[test]
fn build_to_stdout_matches_build_to_file() {
    let dir = TempDir::new().unwrap();
    let src = emit(&dir, "filiform_leibniz3");
    let out = dir.path().join("f.json");
    thx(&["build", &src, "--max-degree", "4", "--out", out.to_str().unwrap()]);
    let piped = thx(&["build", &src, "--max-degree", "4"]);
    assert_eq!(String::from_utf8(piped.stdout).unwrap(), fs::read_to_string(out).unwrap());
}

#[test]
fn build_is_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let src = emit(&dir, "sl2_fundamental_nilpotent");
    let outputs: Vec<Vec<u8>> = [None, Some("1"), Some("3"), None]
        .iter()
        .map(|threads| {
            let env: Vec<(&str, &str)> = threads.iter().map(|t| ("THX_THREADS", *t)).collect();
            thx_env(&["build", &src, "--max-degree", "5"], &env).stdout
        })
        .collect();
    assert!(!outputs[0].is_empty());
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn build_dims_of_small_examples() {
    let dir = TempDir::new().unwrap();
    let dims = |name: &str, n: &str| -> serde_json::Value {
        let out = thx(&["build", &emit(&dir, name), "--max-degree", n]);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["dims"].clone()
    };
    let a = dims("abelian", "3");
    assert_eq!(a, serde_json::json!({"-3": 0, "-2": 0, "-1": 1, "0": 1, "1": 0}));
    let c = dims("crossed_module_aff1", "5");
    assert_eq!(c, serde_json::json!({"-5": 0, "-4": 0, "-3": 0, "-2": 0, "-1": 2, "0": 2, "1": 1}));
}

#[test]
fn verify_stringent_catalog_at_depth_four() {
    let dir = TempDir::new().unwrap();
    for n in NAMES.iter().filter(|n| **n != "sl2_fundamental_nilpotent") {
        let out = thx(&["verify", &emit(&dir, n), "--max-degree", "4"]);
        assert_eq!(code(&out), 0, "{n}:\n{}", stdout(&out));
        assert!(!stdout(&out).contains("FAIL"));
    }
}

#[test]
fn verify_reports_the_non_stringent_obstruction() {
    let src = data("sl2_fundamental_nilpotent.json");
    let out = thx(&["verify", src.to_str().unwrap(), "--max-degree", "4"]);
    assert_eq!(code(&out), 5);
    let text = stdout(&out);
    assert!(text.contains("FAIL ∂⟦ξ, v⟧ = −⟦ξ, ∂v⟧"), "{text}");
    assert!(text.contains("witness"));
}

#[test]
fn verify_homology_prints_the_status_line() {
    let src = data("heisenberg_leibniz.json");
    let out = thx(&["verify", src.to_str().unwrap(), "--max-degree", "4", "--homology"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("H₋₂ = 0: yes"), "{}", stdout(&out));
}

#[test]
fn verify_accepts_the_golden_hierarchy_file() {
    let out = thx(&["verify", data("heisenberg_leibniz.n4.json").to_str().unwrap(), "--homology"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn fault_injected_hierarchy_file_exits_five_with_witness() {
    let dir = TempDir::new().unwrap();
    let text = fs::read_to_string(data("heisenberg_leibniz.n4.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = v["brackets"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e["x"] == serde_json::json!([-1, 0]) && e["y"] == serde_json::json!([-1, 0]))
        .unwrap();
    entry["value"] = serde_json::json!(["5"]);
    let p = dir.path().join("faulty.json");
    fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
    let out = thx(&["verify", p.to_str().unwrap()]);
    assert_eq!(code(&out), 5);
    let text = stdout(&out);
    assert!(text.contains("FAIL") && text.contains("witness: "), "{text}");
}

#[test]
fn identity_morphism_induces_identities() {
    let dir = TempDir::new().unwrap();
    let src = emit(&dir, "filiform_leibniz3");
    let m = dir.path().join("id.json");
    fs::write(&m, r#"{"phi": [["1"]], "chi": [["1","0","0"],["0","1","0"],["0","0","1"]]}"#).unwrap();
    let out = thx(&["morphism", &src, &src, m.to_str().unwrap(), "--max-degree", "4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for (deg, rows) in v["components"].as_object().unwrap() {
        for (i, row) in rows.as_array().unwrap().iter().enumerate() {
            for (j, x) in row.as_array().unwrap().iter().enumerate() {
                let want = if i == j { "1" } else { "0" };
                assert_eq!(x.as_str().unwrap(), want, "degree {deg}");
            }
        }
    }
    assert_eq!(v["report"]["ok"], serde_json::json!(true));
}

#[test]
fn heisenberg_scaling_morphism() {
    let h = data("heisenberg_leibniz.json");
    let m = data("heisenberg_scale2.morphism.json");
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("g.json");
    let args = [h.to_str().unwrap(), h.to_str().unwrap(), m.to_str().unwrap()];
    let out = thx(&["morphism", args[0], args[1], args[2], "--max-degree", "3", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("PASS morphism preserves brackets"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(v["components"]["-2"], serde_json::json!([["4"]]));
}

#[test]
fn morphism_into_non_stringent_target_exits_six() {
    let h = data("heisenberg_leibniz.json");
    let s = data("sl2_fundamental_nilpotent.json");
    let m = data("heisenberg_to_sl2_fundamental_zero.morphism.json");
    let out = thx(&["morphism", h.to_str().unwrap(), s.to_str().unwrap(), m.to_str().unwrap(), "--max-degree", "3"]);
    assert_eq!(code(&out), 6);
    assert!(stderr(&out).contains("not stringent"));
}

#[test]
fn invalid_morphism_exits_two() {
    let dir = TempDir::new().unwrap();
    let h = data("heisenberg_leibniz.json");
    let m = dir.path().join("bad.json");
    // χ(e) = 2e, χ(f) = 2f breaks χ(e∘e) = χ(e)∘χ(e)
    fs::write(&m, r#"{"phi": [["2"]], "chi": [["2","0"],["0","2"]]}"#).unwrap();
    let out = thx(&["morphism", h.to_str().unwrap(), h.to_str().unwrap(), m.to_str().unwrap(), "--max-degree", "3"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}
