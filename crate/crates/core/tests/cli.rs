use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gf(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gf"));
    cmd.args(args).env_remove("GF_CACHE_DIR");
    if let Some(c) = cache {
        cmd.env("GF_CACHE_DIR", c);
    }
    cmd.output().expect("gf runs")
}

#[test]
fn betti_report_is_deterministic_and_timing_is_separate() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = gf(&["betti", "--algebra", "W1", "--module", "T(0,0)", "--qmax", "2", "--ladder", "6:2:2", "--out", out.to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ja = fs::read(&a).unwrap();
    assert_eq!(ja, fs::read(&b).unwrap());
    assert!(!String::from_utf8_lossy(&ja).contains("seconds"));
    let timing = fs::read_to_string(dir.path().join("a.json.timing.json")).unwrap();
    assert!(timing.contains("wall_seconds"));
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    let betti: Vec<u64> = v["q"].as_array().unwrap().iter().map(|d| d["betti"].as_u64().unwrap()).collect();
    assert_eq!(betti, vec![1, 1, 0]);
}

#[test]
fn cache_hit_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["betti", "--algebra", "L0", "--module", "1(2)", "--qmax", "3"];
    let fresh = gf(&args, Some(&cache));
    assert_eq!(fresh.status.code(), Some(0));
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    let hit = gf(&args, Some(&cache));
    assert_eq!(fresh.stdout, hit.stdout);
    // same job, different spelling of the module
    let respelled = gf(&["betti", "--algebra", "L0", "--module", " 1( 2 ) ", "--qmax", "3"], Some(&cache));
    assert_eq!(fresh.stdout, respelled.stdout);
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
    let uncached = gf(&args, None);
    assert_eq!(fresh.stdout, uncached.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(gf(&["verify", "--cocycle", "nabla2", "--K", "8"], None).status.code(), Some(0));
    assert_eq!(gf(&["betti", "--algebra", "W1", "--module", "Tx(0)*Tx(0)"], None).status.code(), Some(3));
    assert_eq!(gf(&["betti", "--algebra", "W1", "--module", "T(2,0"], None).status.code(), Some(2));
    assert_eq!(gf(&["verify", "--cocycle", "nabla7"], None).status.code(), Some(2));
    let o = gf(&["betti", "--algebra", "W1", "--module", "T(0,0)^2", "--qmax", "2", "--ladder", "1:1:2:2"], None);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn job_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    let out = dir.path().join("inv.csv");
    fs::write(
        &job,
        format!(r#"{{"command":"invariants","power":2,"wmin":-2,"format":"csv","out":{:?}}}"#, out.to_str().unwrap()),
    )
    .unwrap();
    let o = gf(&["run", "--job", job.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let dims: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(dims, vec!["0", "0", "0", "0", "1"]);
}

#[test]
fn audit_subcommand() {
    let o = gf(&["audit", "--n", "2", "--module", "1(0)*T(2,0)", "--qmax", "2", "--M", "4"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["n"], 2);
}
