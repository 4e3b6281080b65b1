use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycloperfect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn primes(v: &Value) -> Vec<(String, u64)> {
    v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["prime"].as_str().unwrap().to_string(), f["exp"].as_u64().unwrap()))
        .collect()
}

#[test]
fn factor_examples() {
    let seven = json(&["factor", "--ring", "eisenstein", "7"]);
    assert_eq!(seven["unit"], "0-1w");
    assert_eq!(primes(&seven), [("3+1w".to_string(), 1), ("3+2w".to_string(), 1)]);

    let two = json(&["factor", "--ring", "gaussian", "2"]);
    assert_eq!(two["unit"], "0-1i");
    assert_eq!(primes(&two), [("1+1i".to_string(), 2)]);

    let one = json(&["factor", "--ring", "eisenstein", "1"]);
    assert_eq!(one["unit"], "1");
    assert!(primes(&one).is_empty());
}

#[test]
fn negative_elements_parse_as_positionals() {
    let v = json(&["factor", "--ring", "gaussian", "-3-4i"]);
    assert_eq!(v["element"], "-3-4i");
    assert_eq!(primes(&v), [("2+1i".to_string(), 2)]);
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "--ring", "gaussian", "2+1i"]);
    assert_eq!(v["status"], "norm_perfect");
    assert_eq!(v["sigma_norm"], "10");
    assert_eq!(json(&["classify", "--ring", "eisenstein", "2+1w"])["status"], "deficient");
    assert_eq!(json(&["classify", "--ring", "gaussian", "0+1i"])["status"], "deficient");

    let p = json(&["classify", "--ring", "gaussian", "2+1i", "--primitive"]);
    assert_eq!(p["primitive"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["factor", "--ring", "gaussian", "2+x"]).status.code(), Some(64));
    assert_eq!(run(&["factor", "--ring", "octonion", "2"]).status.code(), Some(64));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(64));
    assert_eq!(run(&["--csv", "factor", "--ring", "gaussian", "5"]).status.code(), Some(64));
    assert_eq!(run(&["factor", "--ring", "gaussian", "0"]).status.code(), Some(65));
    assert_eq!(run(&["sigma", "--ring", "eisenstein", "0"]).status.code(), Some(65));
    assert_eq!(run(&["cyclo", "--p", "23", "ramify-check"]).status.code(), Some(65));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn mersenne_flags_eleven() {
    let v = json(&["mersenne", "--ring", "eisenstein", "--max-k", "50"]);
    let records = v["records"].as_array().unwrap();
    let eleven = records.iter().find(|r| r["k"] == 11).unwrap();
    assert_eq!(eleven["is_prime"], true);
    assert_eq!(eleven["norm"], "176419");
    assert!(records.iter().all(|r| r["prime_exponent_ok"] == true));
}

#[test]
fn mersenne_cache_resume_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("m.jsonl");
    let cache = cache.to_str().unwrap();
    let first = json(&["mersenne", "--ring", "gaussian", "--max-k", "40", "--cache", cache]);
    let resumed = json(&["mersenne", "--ring", "gaussian", "--max-k", "40", "--cache", cache, "--resume"]);
    assert_eq!(first["records"], resumed["records"]);

    let w = json(&["mersenne", "--ring", "gaussian", "--max-k", "12", "--witness"]);
    let ks: Vec<u64> = w["witnesses"].as_array().unwrap().iter().map(|x| x["k"].as_u64().unwrap()).collect();
    assert_eq!(ks, [4, 6, 8, 9, 10, 12]);
}

#[test]
fn search_odd_finds_two_plus_i() {
    let v = json(&["search-odd", "--ring", "gaussian", "--max-norm", "2000"]);
    let found = v["findings"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f["element"] == "2+1i" && f["status"] == "norm_perfect");
    assert!(found);
    assert!(v["breaches"].as_array().unwrap().is_empty());

    let csv = run(&["--csv", "search-odd", "--ring", "gaussian", "--max-norm", "2000"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("ring,element,"));
    assert!(text.lines().any(|l| l.starts_with("gaussian,2+1i,false,norm_perfect")));
}

#[test]
fn search_checkpoint_resumes_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("scan.jsonl");
    let ckpt = ckpt.to_str().unwrap();
    let args = ["search-even", "--ring", "eisenstein", "--max-norm", "3000", "--checkpoint", ckpt];
    let mut first = json(&args);
    let mut second = json(&args);
    first["wall_time_secs"] = Value::Null;
    second["wall_time_secs"] = Value::Null;
    assert_eq!(first, second);
}

#[test]
fn cyclo_commands() {
    assert_eq!(json(&["cyclo", "--p", "7", "ramify-check"])["value"], true);
    assert_eq!(json(&["cyclo", "--p", "5", "discriminant"])["value"], "125");
    assert_eq!(json(&["cyclo", "--p", "5", "mersenne-norm", "--k", "2"])["value"], "31");
    assert_eq!(json(&["cyclo", "--p", "7", "residue-degree", "--q", "2"])["value"], 3);
    assert_eq!(json(&["cyclo", "--p", "3", "norm", "1,1"])["value"], "1");
    assert_eq!(json(&["cyclo", "--p", "5", "even", "1,-1"])["value"], true);
}

#[test]
fn validate_odd_form_reads_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.json");
    std::fs::write(&path, r#"{"p": 5, "entries": [{"j": 1, "e": 4, "special": true}, {"j": 2, "e": 4}]}"#).unwrap();
    let v = json(&["cyclo", "--p", "5", "validate-odd-form", "--input", path.to_str().unwrap()]);
    assert!(v["conforms"].is_boolean());

    std::fs::write(&path, "{not json").unwrap();
    let bad = run(&["cyclo", "--p", "5", "validate-odd-form", "--input", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(64));
}

fn strip_wall_times(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_time_secs");
            map.values_mut().for_each(strip_wall_times);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_wall_times),
        _ => {}
    }
}

#[test]
fn verify_is_deterministic_apart_from_timing() {
    let mut first = json(&["verify", "core"]);
    let mut second = json(&["verify", "core"]);
    assert_eq!(first["passed"], true);
    assert!(first["defaults"]["seed"].is_u64());
    strip_wall_times(&mut first);
    strip_wall_times(&mut second);
    assert_eq!(first, second);
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
