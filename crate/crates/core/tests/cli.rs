use std::path::PathBuf;
use std::process::{Command, Output};

use evoalg::AnalysisReport;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evoalg")).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> AnalysisReport {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    AnalysisReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("evoalg_cli_{}_{name}", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn nilpotent_corank_one() {
    let r = run_ok(&["nilpotent", data("corank_one.json").to_str().unwrap()]);
    let n = r.nilpotent.unwrap();
    assert!(n.trivial_only);
    assert!(n.summary.starts_with("unique trivial (corank-one-determinant); per-cycle tags 1a"));
    assert_eq!(n.quick.rank, 3);
}

#[test]
fn nilpotent_two_chains_and_raw_matrix() {
    let r = run_ok(&["nilpotent", data("two_chains.json").to_str().unwrap()]);
    let n = r.nilpotent.unwrap();
    assert!(n.summary.starts_with("unique trivial (positive-chain-products)"));
    assert!(n.rank_two.unwrap().oracle_agrees);

    let r = run_ok(&["nilpotent", data("rank_nm2.json").to_str().unwrap()]);
    assert!(r.algebra.is_none());
    let n = r.nilpotent.unwrap();
    assert!(!n.trivial_only);
    assert!(n.rank_two.unwrap().oracle_agrees);
}

#[test]
fn idempotent_all_ones() {
    let r = run_ok(&["idempotent", data("allones2d.json").to_str().unwrap()]);
    let t = r.idempotent.unwrap().two_dim.unwrap();
    let pts: Vec<(&str, &str)> = t.points.iter().map(|p| (p.x.value.as_str(), p.y.value.as_str())).collect();
    assert_eq!(pts, [("0", "0"), ("1/2", "1/2")]);
    assert!(t.points.iter().all(|p| p.x.exact && p.y.exact));
    // (0, 1/b) solves the first equation but not the second
    assert_eq!(t.rejected.len(), 1);
    assert_eq!(serde_json::to_value(t.case).unwrap(), "bd=ac");
}

#[test]
fn idempotent_cubic_case_reports_bounds() {
    let r = run_ok(&["idempotent", data("cubic2d.json").to_str().unwrap()]);
    let t = r.idempotent.unwrap().two_dim.unwrap();
    assert_eq!(t.points.len(), 4);
    for p in t.points.iter().filter(|p| !p.x.exact) {
        let b: f64 = p.x.error_bound.as_ref().unwrap().parse().unwrap();
        assert!(b > 0.0 && b < 1e-12);
    }
}

#[test]
fn decompose_and_canonical() {
    let r = run_ok(&["decompose", data("two_blocks.json").to_str().unwrap()]);
    let d = r.decomposition.unwrap();
    assert_eq!(d.components.len(), 2);
    assert!(d.relabeling.verified);

    let r = run_ok(&["canonical", data("cycle4.json").to_str().unwrap()]);
    let c = r.canonical.unwrap();
    assert!(c.map.verified);
    let a = c.all_ones.unwrap();
    assert!(!a.holds);
    assert!(a.wrap_failure);
}

#[test]
fn iso_search_and_given_gamma() {
    let a = tmp_file(
        "iso_a.json",
        r#"{"n": 4, "pi": [2, 3, 1, 4], "tau": [1, 2, 3, 4], "a_pi": ["1", "2", "3", "4"], "a_tau": ["5", "6", "7", "8"]}"#,
    );
    // the same algebra relabeled along gamma = [2, 3, 4, 1]
    let b = tmp_file(
        "iso_b.json",
        r#"{"n": 4, "pi": [1, 3, 4, 2], "tau": [1, 2, 3, 4], "a_pi": ["4", "1", "2", "3"], "a_tau": ["8", "5", "6", "7"]}"#,
    );
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let r = run_ok(&["iso", a, b]);
    let s = r.isomorphism.unwrap();
    assert!(s.isomorphic && s.map.unwrap().verified);
    let gamma = s.gamma.unwrap();
    assert_eq!(gamma[3], 1);

    let r = run_ok(&["iso", a, b, "--gamma", "2,3,4,1"]);
    assert!(r.isomorphism.unwrap().gamma_given);

    let out = run(&["iso", a, b, "--gamma", "1,2,3,4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
    let out = run(&["iso", a, b, "--gamma", "1,1,3,4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_lists_skipped_analyses() {
    let r = run_ok(&["analyze", data("corank_one.json").to_str().unwrap()]);
    assert!(r.baric.is_some() && r.nilpotent.is_some() && r.idempotent.is_some());
    let skipped: Vec<&str> = r.skipped.iter().map(|s| s.analysis.as_str()).collect();
    assert_eq!(skipped, ["decompose", "canonical", "iso"]);
    assert!(r.skipped[0].reason.contains("cycle supports"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["analyze", "--seed", "3"],
        vec!["idempotent", "--tol", "1e-10"],
        vec!["baric", "--pretty"],
    ] {
        let mut a = args.clone();
        let f = data("cubic2d.json");
        a.insert(1, f.to_str().unwrap());
        let first = run(&a);
        let second = run(&a);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout);
    }
}

#[test]
fn pretty_output() {
    let out = run(&["idempotent", data("allones2d.json").to_str().unwrap(), "--pretty"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(1/2, 1/2)"));
    assert!(text.contains("case bd=ac"));
    assert!(text.contains("rejected (0, 1)"));
}

#[test]
fn exit_codes() {
    let empty = tmp_file("empty.json", "");
    let out = run(&["baric", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty document"));

    let malformed = tmp_file("malformed.json", "{\"n\": 2,\n\"pi\": [2, 1],\n\"tau\": [1 2]}");
    let out = run(&["baric", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = run(&["baric", "/nonexistent/evoalg.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["decompose", data("corank_one.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycle supports of pi and tau differ"));

    let out = run(&["idempotent", data("rank_nm2.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // rank 1 in dimension 4 is not n-2
    let low = tmp_file("low.json", r#"{"matrix": [["1","1","1","1"],["1","1","1","1"],["1","1","1","1"],["1","1","1","1"]]}"#);
    let out = run(&["nilpotent", low.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank is 1"));

    let out = run(&["canonical", data("corank_one.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["idempotent", data("allones2d.json").to_str().unwrap(), "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
