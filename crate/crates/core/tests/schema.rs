use serde_json::Value;
use sl2v_core::runner::{run, RunConfig};

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn report(q: u32, checks: &str, timings: bool) -> Value {
    let mut cfg = RunConfig::new(q, checks).unwrap();
    cfg.cache_dir = None;
    cfg.timings = timings;
    serde_json::from_str(&run(&cfg).unwrap().to_json()).unwrap()
}

#[test]
fn reports_validate() {
    let v = validator();
    for r in [
        report(13, "census,eigenvalues,moduli-dim,degree,chartable,graph", false),
        report(29, "centralizers,partition,lift", true),
        report(37, "degree", false),
    ] {
        let errors: Vec<String> = v.iter_errors(&r).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{errors:?}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let v = validator();
    let good = report(13, "degree", false);
    let mut bad = good.clone();
    bad["verdict"] = "maybe".into();
    assert!(!v.is_valid(&bad));
    let mut bad = good.clone();
    bad["results"][0]["status"] = "ok".into();
    assert!(!v.is_valid(&bad));
    let mut bad = good.clone();
    bad["config"]["checks"] = serde_json::json!(["bogus"]);
    assert!(!v.is_valid(&bad));
    let mut bad = good;
    bad.as_object_mut().unwrap().remove("config");
    assert!(!v.is_valid(&bad));
}
