use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn kleisli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleisli")).args(args).env_remove("KLEISLI_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn bounded_trace_lists_short_words() {
    let o = kleisli(&["trace", &data("example.json"), "--state", "x", "--max-len", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "b\nab\nbb\n");
}

#[test]
fn exact_trace_of_silent_loop_is_empty() {
    let o = kleisli(&["trace", &data("eps_loop.json"), "--state", "x", "--exact"]);
    assert_eq!(stdout(&o), "language: empty\n");
    let o = kleisli(&["trace", &data("example.json"), "--state", "x", "--exact"]);
    assert!(stdout(&o).starts_with("dfa states=2 start=0\n"));
}

#[test]
fn trace_equivalence_against_saturated_self() {
    let dir = tempfile::tempdir().unwrap();
    let sat = dir.path().join("sat.json");
    let o = kleisli(&["saturate", &data("example.json"), "--strategy", "star", "-o", sat.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let a = format!("{}:x", data("example.json"));
    for state in ["x", "y", "z"] {
        let b = format!("{}:{state}", sat.display());
        let o = kleisli(&["trace-equiv", &format!("{}:{state}", data("example.json")), &b]);
        assert_eq!(code(&o), 0, "{state}");
    }
    let o = kleisli(&["trace-equiv", &a, &format!("{}:z", data("example.json"))]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).ends_with(": no\n"));
}

#[test]
fn weak_but_not_strong_pair() {
    let (a, b) = (data("direct.json"), data("delayed.json"));
    let o = kleisli(&["bisim", &a, &b, "--kind", "weak", "--pair", "x,y"]);
    assert_eq!((code(&o), stdout(&o)), (0, "x ~ y: yes\n".to_string()));
    let o = kleisli(&["bisim", &a, &b, "--kind", "strong", "--pair", "x,y"]);
    assert_eq!((code(&o), stdout(&o)), (1, "x ~ y: no\n".to_string()));
}

#[test]
fn identical_files_match_fully() {
    let a = data("cycle.aut");
    let o = kleisli(&["bisim", &a, &a, "--kind", "strong", "--pair", "0,0", "--pair", "1,1", "--pair", "2,2"]);
    assert_eq!(code(&o), 0);
    let o = kleisli(&["bisim", &a, &a]);
    assert_eq!(stdout(&o), "block 0: 1:0 2:0\nblock 1: 1:1 2:1\nblock 2: 1:2 2:2\n");
}

#[test]
fn both_routes_print_identical_partitions() {
    for args in [vec![data("direct.json"), data("delayed.json")], vec![data("example.json")], vec![data("cycle.aut")]] {
        let mut star = vec!["bisim", "--kind", "weak", "--via", "star"];
        let mut free = vec!["bisim", "--kind", "weak", "--via", "free"];
        star.extend(args.iter().map(String::as_str));
        free.extend(args.iter().map(String::as_str));
        let (s, f) = (kleisli(&star), kleisli(&free));
        assert_eq!(code(&s), 0);
        assert_eq!(stdout(&s), stdout(&f));
    }
}

#[test]
fn star_saturation_adds_weak_steps() {
    let o = kleisli(&["saturate", &data("silent_then_a.json"), "--strategy", "star", "--format", "aut"]);
    let text = stdout(&o);
    assert!(text.contains("(0, \"a\", 2)"), "{text}");
    let dir = tempfile::tempdir().unwrap();
    let edgeless = dir.path().join("edgeless.json");
    std::fs::write(&edgeless, r#"{"kind":"lts","states":["p","q"],"alphabet":["a"],"transitions":[]}"#).unwrap();
    let o = kleisli(&["saturate", edgeless.to_str().unwrap(), "--format", "aut"]);
    assert_eq!(stdout(&o), "des (0, 2, 2)\n(0, \"tau\", 0)\n(1, \"tau\", 1)\n");
}

#[test]
fn free_saturation_summarizes_languages() {
    let o = kleisli(&["saturate", &data("silent_then_a.json"), "--strategy", "free"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entry = v["entries"].as_array().unwrap().iter().find(|e| e["from"] == "x" && e["to"] == "z").unwrap();
    assert_eq!(entry["samples"], serde_json::json!(["a"]));
    let o = kleisli(&["saturate", &data("silent_then_a.json"), "--strategy", "free", "--format", "aut"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn conversions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("cycle.json");
    assert_eq!(code(&kleisli(&["convert", &data("cycle.aut"), "-o", json.to_str().unwrap()])), 0);
    let back = kleisli(&["convert", json.to_str().unwrap(), "--format", "aut"]);
    let direct = kleisli(&["convert", &data("cycle.aut"), "--format", "aut"]);
    assert_eq!(stdout(&back), stdout(&direct));
    let dot = kleisli(&["convert", &data("example.json"), "--format", "dot"]);
    assert!(stdout(&dot).contains("shape=doublecircle"));
}

#[test]
fn minimization() {
    let dir = tempfile::tempdir().unwrap();
    let min = dir.path().join("min.json");
    let o = kleisli(&["minimize", &data("delayed.json"), "--kind", "weak", "-o", min.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&min).unwrap()).unwrap();
    assert_eq!(doc["states"], serde_json::json!(["y", "y0"]));
    let o = kleisli(&["bisim", &data("delayed.json"), min.to_str().unwrap(), "--kind", "weak", "--pair", "y,y", "--pair", "y1,y"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = kleisli(&["minimize", &data("cycle.aut"), "--format", "aut"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&kleisli(&["convert", bad.to_str().unwrap()])), 2);
    let short = dir.path().join("short.aut");
    std::fs::write(&short, "des (0, 2, 2)\n(0, \"a\", 1)\n").unwrap();
    assert_eq!(code(&kleisli(&["convert", short.to_str().unwrap()])), 2);
    assert_eq!(code(&kleisli(&["convert", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&kleisli(&["convert", &data("example.json"), "--format", "aut"])), 3);
    assert_eq!(code(&kleisli(&["trace", &data("example.json"), "--state", "q", "--max-len", "1"])), 4);
    assert_eq!(code(&kleisli(&["bisim", &data("direct.json"), "--pair", "x,nope"])), 4);
    assert_eq!(code(&kleisli(&["check", "--suite", "nope"])), 5);
}

#[test]
fn suites_from_the_command_line() {
    for suite in ["h-compat", "weak-coincide"] {
        let o = kleisli(&["check", "--suite", suite, "--seed", "7", "--cases", "200"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let o = kleisli(&["check", "--suite", "monad-laws", "--cases", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 cases"));
}

#[test]
fn seed_defaults_to_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_kleisli"))
        .args(["check", "--suite", "dagger", "--cases", "5", "--json"])
        .env("KLEISLI_SEED", "99")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 99);
    assert_eq!(v["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["check", "--suite", "trace-lfp", "--seed", "3", "--cases", "20", "--json"];
    assert_eq!(kleisli(&args).stdout, kleisli(&args).stdout);
    let args = ["saturate", &data("example.json"), "--strategy", "free"];
    assert_eq!(kleisli(&args).stdout, kleisli(&args).stdout);
}
