use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cubesff"));
    c.args(args).env_remove("CUBESFF_CAP_BITS");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn keys(v: &serde_json::Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    k.sort();
    k
}

#[test]
fn sampled_output_is_deterministic() {
    let args = ["sigma", "--q", "5", "--d", "1", "--samples", "4", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let scan = ["scan", "--q", "2", "--b-min", "1", "--b-max", "6", "--seed", "3", "--format", "csv"];
    assert_eq!(run(&scan).stdout, run(&scan).stdout);
}

#[test]
fn certificate_schema_and_values() {
    let v = json(&run(&["certificate", "--q-p", "2", "--q-e", "1"]));
    assert_eq!(keys(&v), ["A", "C_A", "d", "factor", "log_bound", "m", "pass", "q"]);
    assert_eq!(v["q"], 2);
    assert_eq!(v["d"], 6);
    assert_eq!(v["pass"], true);
    assert_eq!(v["log_bound"].as_array().unwrap().len(), 2);
}

#[test]
fn sigma_schema() {
    let v = json(&run(&["sigma", "--q", "2", "--A", "0.67", "--alpha", "1", "--d", "2", "--k", "1,0,0,0,0,0,0,1"]));
    assert_eq!(keys(&v), ["A", "alpha", "d", "k", "q", "sigma_den", "sigma_num"]);
    let arr = json(&run(&["sigma", "--q", "7", "--d", "1", "--samples", "3"]));
    assert_eq!(arr.as_array().unwrap().len(), 3);
}

#[test]
fn csv_headers() {
    let o = run(&["localdensity", "--q", "2", "--modulus", "0,1,1", "--format", "csv"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next().unwrap(), "N,k,rho,rho_tilde_num,rho_tilde_den");
    assert_eq!(lines.count(), 4);
    let v = run(&["variance", "--q", "2", "--d", "3", "--M", "1", "--format", "csv"]);
    assert!(v.status.success());
    assert!(stdout(&v).starts_with("q,A,alpha,d,B,M,N,sigma1,sigma2,sigma3,var,var_direct,target,"));
}

#[test]
fn localdensity_json_has_rho6() {
    let v = json(&run(&["localdensity", "--q", "2", "--M", "1"]));
    assert!(v["rho6_tilde"].as_str().unwrap().contains('/'));
    assert!(!v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn gauss_grid_covers_q_1_mod_3() {
    let v = json(&run(&["gauss"]));
    let qs: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["q"].as_u64().unwrap()).collect();
    assert!(qs.iter().all(|q| q % 3 == 1 && *q <= 1024));
    for q in [4, 7, 13, 16, 25, 49, 64, 169, 256, 343, 625, 1024] {
        assert!(qs.contains(&q), "missing {q}");
    }
    for r in v.as_array().unwrap() {
        let q = r["q"].as_f64().unwrap();
        assert!(r["modulus_residual_approx"].as_f64().unwrap() <= 1e-9 * q);
        assert!(r["cube_relation_residual_approx"].as_f64().unwrap() <= 1e-6 * q.powf(1.5));
    }
}

#[test]
fn exit_codes() {
    let o = run(&["selftest", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "config");
    assert_eq!(run(&["sigma", "--q", "6", "--d", "1"]).status.code(), Some(2));
    assert_eq!(run(&["manin", "--q", "2", "--d", "1"]).status.code(), Some(2));
    let cap = run_env(&["localdensity", "--q", "7", "--M", "1"], &[("CUBESFF_CAP_BITS", "8")]);
    assert_eq!(cap.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&cap.stderr).unwrap();
    assert_eq!(err["error"], "cap_exceeded");
    assert_eq!(run(&["selftest"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "q = 5\nd = 1\nsamples = 2\nseed = 9\nformat = \"csv\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = run(&["sigma", "--config", cfg]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("5,"));
    let o = run(&["sigma", "--config", cfg, "--q", "7", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v[0]["q"], 7);
    std::fs::write(dir.path().join("bad.toml"), "nonsense = 1\n").unwrap();
    let bad = run(&["sigma", "--config", dir.path().join("bad.toml").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let o = run(&["certificate", "--q", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), run(&["certificate", "--q", "2"]).stdout);
    let left: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(left.len(), 1, "no temporary files remain");
    let missing = Path::new("/nonexistent-dir/x.json");
    assert_eq!(run(&["certificate", "--q", "2", "--out", missing.to_str().unwrap()]).status.code(), Some(1));
}
