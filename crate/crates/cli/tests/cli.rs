use std::process::{Command, Output};

fn sl2v(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl2v")).args(args).env_remove("SL2V_CACHE_DIR").output().expect("spawn sl2v")
}

#[test]
fn rejects_non_prime_q() {
    let out = sl2v(&["--q", "15"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn rejects_wrong_residue_and_unknown_check() {
    assert_eq!(sl2v(&["--q", "17", "--checks", "census"]).status.code(), Some(2));
    assert_eq!(sl2v(&["--q", "13", "--checks", "census,nope"]).status.code(), Some(2));
    assert_eq!(sl2v(&["--checks", "census"]).status.code(), Some(2));
    assert_eq!(sl2v(&["--q", "13", "--jobs", "0"]).status.code(), Some(2));
}

#[test]
fn selection_at_q29_has_no_homology_results() {
    let out = sl2v(&["--q", "29", "--checks", "census,centralizers,degree"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["config"]["flavor"], "5mod24");
    assert_eq!(v["config"]["checks"], serde_json::json!(["census", "centralizers", "degree"]));
    let names: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.starts_with("centralizer.")));
    assert!(!names.iter().any(|n| n.starts_with("graph") || n.starts_with("acyclicity")));
    assert!(v.get("timings").is_none());
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("sl2v-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let args = ["--q", "13", "--checks", "degree,moduli-dim", "--seed", "7"];
    let direct = sl2v(&args);
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let written = sl2v(&with_out);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_format_and_timings() {
    let out = sl2v(&["--q", "37", "--checks", "chartable", "--format", "text", "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l.starts_with("PASS  chartable.degree-sum")));
    assert!(s.contains("time  chartable"));
    assert!(s.ends_with("verdict: pass\n"));
}

#[test]
fn tolerance_override_is_echoed() {
    let out = sl2v(&["--q", "13", "--checks", "census", "--tol", "1e-6"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["tolerances"]["assertion"], 1e-6);
    assert_eq!(v["config"]["tolerances"]["unitarity"], 1e-10);
}

#[test]
fn lists_checks() {
    let out = sl2v(&["--list-checks"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert_eq!(s.lines().count(), 11);
    assert_eq!(s.lines().next(), Some("census"));
}
