use std::path::PathBuf;
use std::process::Command;

use horn_dmod::cli::{parse_input, run_args, Invocation};
use horn_dmod::exactlin::rat;
use horn_dmod::weyl::parse_op;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> Invocation {
    run_args(std::iter::once("horn-dmod").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&run(&a).stdout).unwrap()
}

#[test]
fn verify_gauss_exits_zero() {
    let f = fixture("gauss.json");
    let out = run(&["verify-thm15", &f]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("verdict: equal"));
    assert_eq!(json(&["verify-thm15", &f])["result"]["verdict"]["verdict"], "equal");
}

#[test]
fn example_horn_not_holonomic() {
    let out = run(&["holonomic", &fixture("holonomy_gap_horn.json")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("holonomic: no"));
    assert_eq!(run(&["holonomic", &fixture("holonomy_gap.json")]).code, 0);
    assert_eq!(run(&["holonomic", "--system", "horn", &fixture("holonomy_gap.json")]).code, 1);
}

#[test]
fn example_not_regular() {
    assert_eq!(run(&["regular", &fixture("holonomy_gap.json")]).code, 1);
    assert_eq!(run(&["regular", &fixture("gauss.json")]).code, 0);
}

#[test]
fn restriction_commands_need_identity_block() {
    let out = run(&["verify-thm15", &fixture("holonomy_gap.json")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("not normalized"));
}

#[test]
fn input_errors_exit_three() {
    let dir = std::env::temp_dir();
    let cases = [
        ("malformed.json", r#"{"B": [[1], [-1]"#),
        ("short_kappa.json", r#"{"B": [[1], [-1]], "kappa": [0]}"#),
        ("float.json", r#"{"B": [[1], [-1]], "kappa": [0, 0.5]}"#),
        ("deficient.json", r#"{"B": [[0], [0]], "kappa": [0, 0]}"#),
    ];
    for (name, src) in cases {
        let p = dir.join(format!("horn-dmod-cli-{name}"));
        std::fs::write(&p, src).unwrap();
        let out = run(&["validate", p.to_str().unwrap()]);
        assert_eq!(out.code, 3, "{name}: {}", out.stderr);
        assert!(out.stderr.starts_with("error:"), "{name}");
    }
    assert_eq!(run(&["validate", "/nonexistent/input.json"]).code, 3);
    assert_eq!(run(&["validate", "--budget", "many", &fixture("gauss.json")]).code, 3);
    assert_eq!(run(&["frobnicate", &fixture("gauss.json")]).code, 3);
}

#[test]
fn non_integral_kappa_is_skipped() {
    let out = run(&["check-correspondence", &fixture("gauss.json")]);
    assert_eq!(out.code, 2);
    assert_eq!(run(&["check-correspondence", &fixture("gauss_int.json")]).code, 0);
}

#[test]
fn exhausted_budget_is_inconclusive() {
    let out = run(&["verify-thm15", "--budget", "1", &fixture("appell_f1.json")]);
    assert_eq!(out.code, 2, "{}", out.stdout);
}

#[test]
fn construct_output_round_trips() {
    let v = json(&["construct", &fixture("appell_f1.json")]);
    let r = &v["result"];
    for (key, n) in [("horn", 2), ("nhorn", 2), ("lattice", 6), ("lattice_basis_ideal", 6), ("euler", 6)] {
        for g in r[key].as_array().unwrap() {
            let s = g.as_str().unwrap();
            assert_eq!(parse_op(s, n).unwrap().render(), s, "{key}");
        }
    }
}

#[test]
fn several_inputs_keep_order_and_take_max_code() {
    let files = [fixture("gauss.json"), fixture("holonomy_gap.json"), fixture("toy_half.json")];
    let mut args = vec!["regular", "--jobs", "3", "--format", "json"];
    args.extend(files.iter().map(String::as_str));
    let out = run(&args);
    assert_eq!(out.code, 1);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let inputs: Vec<&str> = v.as_array().unwrap().iter().map(|d| d["input"].as_str().unwrap()).collect();
    assert_eq!(inputs, files.iter().map(String::as_str).collect::<Vec<_>>());
    let serial = run(&["regular", "--format", "json", &files[0], &files[1], &files[2]]);
    assert_eq!(serial.stdout, out.stdout);
}

#[test]
fn reports_are_deterministic() {
    let f = fixture("gauss.json");
    let a = run(&["report", "--format", "json", &f]);
    let b = run(&["report", "--format", "json", &f]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn example_fixture_parses() {
    let src = std::fs::read_to_string(fixture("holonomy_gap.json")).unwrap();
    let spec = parse_input(&src).unwrap();
    assert_eq!((spec.b.rows(), spec.b.cols()), (7, 3));
    assert_eq!(spec.kappa, vec![rat(2), rat(0), rat(0), rat(0), rat(0), rat(0), rat(0)]);
}

#[test]
fn binary_sets_process_exit_code() {
    let exe = env!("CARGO_BIN_EXE_horn-dmod");
    let out = Command::new(exe).args(["regular", &fixture("holonomy_gap.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("row-sum criterion: false"));
    let out = Command::new(exe).args(["bfunction-cert", "--deep", &fixture("toy_half.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
