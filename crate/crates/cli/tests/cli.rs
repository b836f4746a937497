use std::path::PathBuf;
use std::process::{Command, Output};

use hypergeom::lattice::GaleContext;
use hypergeom::series::TruncatedSeries;
use hypergeom::systems::SystemSpec;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypergeom"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypergeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, Output) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), out)
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const EX55: &str = r#"{
  "A": [[1,1,1,1],[0,1,2,3]],
  "Atilde": [[1,1,1,1],[0,1,2,3],[1,0,0,0],[0,1,0,0]],
  "B": [[-1,2],[0,-3],[3,0],[-2,1]],
  "kappa": ["1/2","1/3","1/5","1/7"]
}"#;

#[test]
fn context_reports_k() {
    let a = scratch("a55.json", "[[1,1,1,1],[0,1,2,3]]");
    let b = scratch("b55.json", "[[-1,2],[0,-3],[3,0],[-2,1]]");
    let t = scratch("t55.json", "[[1,1,1,1],[0,1,2,3],[1,0,0,0],[0,1,0,0]]");
    let (code, out) = run(&["context", "--A", a.to_str().unwrap(), "--B", b.to_str().unwrap(), "--Atilde", t.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["K"], serde_json::json!([["-1", "2"], ["0", "-3"]]));
    assert_eq!(v["latticeIndex"], 3);
    let ctx: GaleContext = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&ctx).unwrap(), v);
}

#[test]
fn toml_problem_matches_json() {
    let j = scratch("p.json", EX55);
    let t = scratch(
        "p.toml",
        r#"A = [[1,1,1,1],[0,1,2,3]]
Atilde = [[1,1,1,1],[0,1,2,3],[1,0,0,0],[0,1,0,0]]
B = [[-1,2],[0,-3],[3,0],[-2,1]]
kappa = ["1/2","1/3","1/5","1/7"]
[bounds]
toricDegree = 2
"#,
    );
    let (c1, o1) = run(&["build", "gkz", "--problem", j.to_str().unwrap()]);
    let (c2, o2) = run(&["build", "gkz", "--problem", t.to_str().unwrap()]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(json_of(&o1), json_of(&o2));
    let sys: SystemSpec = serde_json::from_value(json_of(&o1)).unwrap();
    assert_eq!(sys.generators.len(), 3);
}

#[test]
fn golden_passes() {
    let (code, out) = run(&["golden"]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["fixtures"].as_array().unwrap().len(), 6);
    let again = json_of(&run(&["golden"]).1);
    assert_eq!(v, again);
}

#[test]
fn malformed_input_exits_two() {
    let p = scratch("bad.json", "{\"A\": [[1, 1");
    let (code, out) = run(&["context", "--problem", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(json_of(&out)["error"]["kind"], "InvalidInput");
    let (code, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["build", "gkz", "--problem", "/nonexistent/problem.json"]);
    assert_eq!(code, 2);
}

#[test]
fn computation_error_exits_one() {
    let p = scratch("notfull.json", r#"{"A": [[2, 4]]}"#);
    let (code, out) = run(&["context", "--problem", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(json_of(&out)["error"]["kind"], "LatticeNotFull");
}

#[test]
fn pi_has_factored_and_expanded_rows() {
    let p = scratch("pi.json", EX55);
    let (code, out) = run(&["build", "gkz", "--problem", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let sys = scratch("sys.json", std::str::from_utf8(&out.stdout).unwrap());
    let (code, out) = run(&["pi", "--system", sys.to_str().unwrap(), "--golden"]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["presentation"]["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["factored"][2], "(B2.eta + k2)*(B2.eta + k2 - 1) - z^(-1/3,-2/3)*(B1.eta + k1)*(B3.eta + k3)");
    assert!(v["golden"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn series_then_check_round_trip() {
    let p = scratch(
        "gauss.json",
        r#"{"A": [[1,0,0,1],[0,1,0,1],[0,0,1,-1]], "B": [[1],[1],[-1],[-1]], "kappa": ["0","-2/7","-1/2","-1/3"]}"#,
    );
    let (code, out) = run(&["build", "horn", "--problem", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let horn = scratch("horn.json", std::str::from_utf8(&out.stdout).unwrap());
    let (code, out) = run(&["series", "--system", horn.to_str().unwrap(), "--order", "8"]);
    assert_eq!(code, 0);
    let s: TruncatedSeries = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(s.terms.len(), 9);
    assert_eq!(serde_json::to_value(&s).unwrap(), json_of(&out));
    let sp = scratch("s.json", std::str::from_utf8(&out.stdout).unwrap());
    let (code, out) = run(&["check", "--ops", horn.to_str().unwrap(), "--series", sp.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json_of(&out)["passed"], true);
}

#[test]
fn classify_and_hk() {
    let c = scratch("c81.toml", "A = [[1,1,2,0,0,0,0],[0,1,0,1,1,0,0],[0,-1,0,0,-1,1,0],[0,-1,0,0,0,1,1]]\nB = [[1,1,2],[-1,-1,0],[0,0,-1],[1,0,0],[0,1,0],[-1,0,0],[0,-1,0]]\nkappa = [2,0,0,0,0,0,0]\npointed = false\n");
    let (code, out) = run(&["classify", "--context", c.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json_of(&out);
    assert_eq!(v["beta"], serde_json::json!(["2", "0", "0", "0"]));
    assert_ne!(v["flags"]["completelyToral"], "NOT_IN_PRIME_LEVEL");
    let b = scratch("bq.json", "[[1],[-2],[1]]");
    let (code, out) = run(&["hk", "--B", b.to_str().unwrap(), "--samples", "20", "--format", "pretty"]);
    assert_eq!(code, 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("seed = 0x4b41504e4f56"));
    assert!(text.contains("20/20 samples vanish: pass"));
}
