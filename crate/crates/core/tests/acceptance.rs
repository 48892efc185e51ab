//! Exit criteria. Each test writes one `criterion N: PASS|FAIL ...` line to
//! stdout (uncaptured) before asserting.

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use serde_json::Value;
use sl2v_core::field::VALID_PRIMES_BELOW_200;
use sl2v_core::report::{CheckResult, Status};
use sl2v_core::runner::{run, Report, RunConfig};

const QS: [u32; 4] = [13, 29, 37, 53];

const CENSUS_LIMIT: Duration = Duration::from_secs(60);
const LEMMA21_LIMIT: Duration = Duration::from_secs(5 * 60);
const PARTITION_LIMIT: Duration = Duration::from_secs(10 * 60);
const ACYCLICITY_LIMIT: Duration = Duration::from_secs(30 * 60);
/// Residual bound for the unitary constructions.
const LEMMA21_TOL: f64 = 1e-8;

fn line(n: u32, ok: bool, detail: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" }).unwrap();
}

fn report(q: u32, checks: &str) -> (Report, Duration) {
    let mut cfg = RunConfig::new(q, checks).unwrap();
    cfg.timings = true;
    let t = Instant::now();
    let r = run(&cfg).unwrap();
    (r, t.elapsed())
}

fn all_pass<'a>(rs: impl IntoIterator<Item = &'a CheckResult>) -> (bool, usize) {
    let rs: Vec<&CheckResult> = rs.into_iter().collect();
    (!rs.is_empty() && rs.iter().all(|r| r.status == Status::Pass), rs.len())
}

fn failures(r: &Report) -> Vec<String> {
    r.results.iter().filter(|c| c.status != Status::Pass).map(|c| c.name.clone()).collect()
}

#[test]
fn criterion_01_class_census() {
    let mut ok = true;
    let mut notes = Vec::new();
    for q in QS {
        let (r, dt) = report(q, "census");
        let (pass, n) = all_pass(r.results_for("census"));
        ok &= pass && n == 9 && dt < CENSUS_LIMIT;
        notes.push(format!("q={q}: {n} items {:.1}s", dt.as_secs_f64()));
        if !pass {
            notes.push(format!("failed {:?}", failures(&r)));
        }
    }
    line(1, ok, &notes.join(", "));
    assert!(ok);
}

fn centralizer_values(r: &Report) -> Vec<u64> {
    r.results_for("centralizer").map(|c| c.computed.as_u64().unwrap()).collect()
}

#[test]
fn criterion_02_centralizer_dimensions() {
    let pinned: [(u32, [u64; 8]); 2] = [(13, [6, 18, 9, 12, 1, 3, 3, 3]), (29, [14, 98, 49, 66, 1, 7, 7, 17])];
    let mut ok = true;
    let mut notes = Vec::new();
    for q in QS {
        let (r, _) = report(q, "centralizers");
        let (pass, n) = all_pass(r.results_for("centralizer"));
        let values = centralizer_values(&r);
        ok &= pass && n == 8 && values[4] == 1;
        if let Some((_, want)) = pinned.iter().find(|(p, _)| *p == q) {
            ok &= values == want.to_vec();
        }
        notes.push(format!("q={q}: {values:?}"));
    }
    line(2, ok, &notes.join(", "));
    assert!(ok);
}

fn support(c: &CheckResult) -> Vec<String> {
    c.computed["support"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

#[test]
fn criterion_03_eigenvalue_supports() {
    let mut ok = true;
    let mut notes = Vec::new();
    for q in QS {
        let (r, _) = report(q, "eigenvalues");
        let rs: Vec<&CheckResult> = r.results_for("eigenvalues").collect();
        let (pass, n) = all_pass(rs.iter().copied());
        ok &= pass && n == 2;
        let m = (q as u64 - 1) / 2;
        for c in &rs {
            let mut s = support(c);
            s.sort();
            let want: Vec<&str> = if c.name.ends_with("g1") { vec!["-i", "i"] } else { vec!["-1", "w", "w^5"] };
            ok &= s == want && c.computed["total"].as_u64() == Some(m);
        }
        notes.push(format!("q={q}: {}", rs.iter().map(|c| support(c).join("/")).collect::<Vec<_>>().join(" ")));
    }
    line(3, ok, &notes.join(", "));
    assert!(ok);
}

#[test]
fn criterion_04_moduli_dimension_identity() {
    let mut ok = true;
    for q in QS {
        let (r, _) = report(q, "moduli-dim");
        let m = (q as u64 - 1) / 2;
        for (k, c) in r.results_for("moduli-dim").enumerate() {
            ok &= c.status == Status::Pass && c.computed.as_u64() == Some((k as u64 + 1) * m * m);
        }
        ok &= r.results_for("moduli-dim").count() == 4;
    }
    line(4, ok, "q in {13, 29, 37, 53}, k in 0..=3");
    assert!(ok);
}

#[test]
fn criterion_05_degree_inequalities() {
    let mut ok = true;
    let mut bad = Vec::new();
    for q in VALID_PRIMES_BELOW_200 {
        let (r, _) = report(q, "degree");
        let rs: Vec<&CheckResult> = r.results_for("degree").collect();
        let amqm = rs.iter().find(|c| c.name == "degree.amqm").unwrap();
        let this = rs.len() == 3 && rs.iter().all(|c| c.status == Status::Pass) && amqm.computed["k1"] == 2 && amqm.computed["k2"] == 3;
        if !this {
            bad.push(q);
        }
        ok &= this;
    }
    line(5, ok, &format!("{} primes checked, failures {bad:?}", VALID_PRIMES_BELOW_200.len()));
    assert!(ok);
}

#[test]
fn criterion_06_lemma21_harness() {
    let (r, dt) = report(13, "lemma21");
    let sweeps: Vec<&CheckResult> = r.results_for("lemma21").filter(|c| !c.name.ends_with(".unitarity")).collect();
    let mut ok = sweeps.len() == 4 && r.passed() && dt < LEMMA21_LIMIT;
    let mut notes = Vec::new();
    for c in &sweeps {
        let res = |k: &str| c.computed[k].as_str().and_then(|s| s.parse::<f64>().ok()).unwrap_or(f64::INFINITY);
        ok &= res("max_diag_residual") <= LEMMA21_TOL && res("max_commute_residual") <= LEMMA21_TOL;
        ok &= c.computed["min_slack"].as_i64().is_some_and(|s| s >= 0);
        notes.push(format!("{} {} pairs", c.name.trim_start_matches("lemma21."), c.computed["pairs"]));
    }
    line(6, ok, &format!("{} in {:.1}s", notes.join(", "), dt.as_secs_f64()));
    assert!(ok);
}

fn heavy() -> &'static (Report, Duration) {
    static HEAVY: OnceLock<(Report, Duration)> = OnceLock::new();
    HEAVY.get_or_init(|| report(13, "acyclicity,partition,lift"))
}

fn timing(r: &Report, check: &str) -> Duration {
    Duration::from_millis(r.timings.as_ref().and_then(|t| t.get(check)).copied().unwrap_or(u64::MAX / 2))
}

#[test]
fn criterion_07_partition_of_unity_and_lift() {
    let (r, _) = heavy();
    let (p, np) = all_pass(r.results_for("partition"));
    let (l, nl) = all_pass(r.results_for("lift"));
    let dt = timing(r, "partition") + timing(r, "lift");
    let ok = p && l && np == 1 && nl == 3 && dt < PARTITION_LIMIT;
    let part = r.results_for("partition").next().map(|c| c.computed.clone()).unwrap_or(Value::Null);
    line(
        7,
        ok,
        &format!("identity over Q[PSL2(13)] via {} path, lift {}, {:.1}s", part["path"], if l { "exact" } else { "failed" }, dt.as_secs_f64()),
    );
    assert!(ok, "{:?}", failures(r));
}

#[test]
fn criterion_08_acyclicity_at_13() {
    let (r, _) = heavy();
    let cert = r.results.iter().find(|c| c.name == "acyclicity.certificate").unwrap();
    let smith = r.results.iter().find(|c| c.name == "acyclicity.smith").unwrap();
    let det = cert.computed.get("determinant").cloned().unwrap_or(Value::Null);
    let dt = timing(r, "acyclicity");
    let unimodular = cert.status == Status::Pass && (det == "1" || det == "-1");
    let homology = smith.status == Status::Pass && smith.computed["h0"] == "Z" && smith.computed["h1"] == "0";
    let ok = unimodular && homology && dt < ACYCLICITY_LIMIT;
    let closest = &cert.computed["closest"]["determinant"];
    let digits = closest.as_str().map(|s| s.trim_start_matches('-').len()).unwrap_or(0);
    line(
        8,
        ok,
        &format!(
            "det {det}, closest candidate |det| has {digits} digits, H1 {}, {:.1}s; {}",
            smith.computed["h1"],
            dt.as_secs_f64(),
            cert.detail.as_deref().unwrap_or("")
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_09_character_table() {
    let mut ok = true;
    for q in QS {
        let (r, _) = report(q, "chartable");
        let (pass, n) = all_pass(r.results_for("chartable"));
        ok &= pass && n == 4;
    }
    line(9, ok, "both orthogonality relations and the degree sum, exact, q in {13, 29, 37, 53}");
    assert!(ok);
}

#[test]
fn criterion_10_determinism() {
    let checks = "census,centralizers,eigenvalues,moduli-dim,degree,lemma21,chartable,graph";
    let render = || {
        let mut cfg = RunConfig::new(13, checks).unwrap();
        cfg.seed = 20;
        run(&cfg).unwrap().to_json()
    };
    let a = render();
    let b = render();
    let ok = a == b && !a.is_empty();
    line(10, ok, &format!("{} bytes, identical = {}", a.len(), a == b));
    assert!(ok);
}
