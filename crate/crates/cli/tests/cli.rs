use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn rcm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcm"))
        .args(args)
        .env_remove("RCM_PRECISION")
        .output()
        .expect("run rcm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn compute_csv_ground_state() {
    let o = rcm(&["compute", "--kappa", "-1", "--n", "0", "--mu", "0.5", "--p-min", "0", "--p-max", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,kappa,mu,beta,p,repr,A,B,C"));
    let row0: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row1: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row0[..6], &["0", "-1", "0.5", "1.0", "0", "traditional"]);
    let num = |s: &str| s.parse::<f64>().unwrap();
    assert!((num(row0[6]) - 1.0).abs() < 1e-15);
    assert!((num(row0[7]) - 0.75f64.sqrt()).abs() < 1e-15);
    assert!((num(row0[8]) + 0.25).abs() < 1e-15);
    assert!((num(row1[6]) - (1.0 + 3f64.sqrt())).abs() < 1e-14);
    assert!(lines.next().is_none());
}

#[test]
fn compute_json_envelope_and_skip_records() {
    let o = rcm(&["compute", "--kappa", "-1", "--n", "0", "--mu", "0.5", "--p-min", "-1", "--p-max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema_version"], "1");
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["p"], -1);
    assert!(records[0]["skip"].as_str().unwrap().starts_with("p=-1 undetermined"));
    assert!(records[0].get("A").is_none());
    assert_eq!(records[1]["A"], 1.0);
    assert_eq!(records[1]["repr"], "traditional");
    // field order on the wire follows the record layout
    let text = stdout(&o);
    let row = &text[text.rfind("\"n\":").unwrap()..];
    let at: Vec<usize> = ["n", "kappa", "mu", "beta", "nu", "epsilon", "a", "p", "repr", "A", "B", "C"]
        .iter()
        .map(|k| row.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{at:?}");
    assert_eq!(v["summary"]["skipped"], 1);
}

#[test]
fn compute_csv_skips_go_to_stderr() {
    let o = rcm(&["compute", "--kappa", "-1", "--n", "0", "--mu", "0.5", "--p-min", "-1", "--p-max", "-1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "n,kappa,mu,beta,p,repr,A,B,C");
    assert!(stderr(&o).contains("p=-1 undetermined"));
}

#[test]
fn compute_strict_exits_three() {
    let o = rcm(&["compute", "--kappa", "-1", "--n", "0", "--mu", "0.5", "--p-min", "-1", "--p-max", "0", "--strict"]);
    assert_eq!(o.status.code(), Some(3));
    let o = rcm(&["compute", "--kappa", "-1", "--n", "0", "--mu", "0.5", "--p-min", "0", "--p-max", "3", "--strict"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn compute_rejects_invalid_states() {
    let o = rcm(&["compute", "--kappa", "1", "--n", "0", "--mu", "0.5", "--p-min", "0", "--p-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no bound state"));
    assert!(stdout(&o).is_empty());
    for args in [
        &["compute", "--kappa", "0", "--n", "0", "--mu", "0.5", "--p-min", "0", "--p-max", "1"][..],
        &["compute", "--kappa", "-1", "--n", "0", "--mu", "1.5", "--p-min", "0", "--p-max", "1"],
        &["compute", "--kappa", "-1", "--n", "0", "--p-min", "0", "--p-max", "1"],
        &["compute", "--kappa", "-1", "--n", "0", "--mu", "0.5", "--z", "3", "--p-min", "0", "--p-max", "1"],
        &["compute", "--kappa", "-1", "--n", "0", "--mu", "0.5", "--p-min", "2", "--p-max", "1"],
        &["compute", "--kappa", "-1", "--n", "0", "--mu", "0.5", "--p-min", "0", "--p-max", "1", "--repr", "x"],
    ] {
        assert_eq!(rcm(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn compute_from_charge_and_both_representations() {
    let o = rcm(&["compute", "--kappa", "-2", "--n", "1", "--z", "80", "--p-min", "-2", "--p-max", "3", "--repr", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let records = v["records"].as_array().unwrap();
    let mu = records[0]["mu"].as_f64().unwrap();
    assert!((mu - 80.0 * 0.0072973525693).abs() < 1e-15);
    let values: Vec<_> = records.iter().filter(|r| r.get("A").is_some()).collect();
    for pair in values.chunks(2) {
        assert_eq!(pair[0]["p"], pair[1]["p"]);
        assert_eq!((pair[0]["repr"].as_str(), pair[1]["repr"].as_str()), (Some("traditional"), Some("nu")));
        let (x, y) = (pair[0]["A"].as_f64().unwrap(), pair[1]["A"].as_f64().unwrap());
        assert!((x - y).abs() < 1e-10 * x);
    }
}

#[test]
fn compute_recurrence_matches_closed_form() {
    let run = |repr: &str| {
        let o = rcm(&["compute", "--kappa", "3", "--n", "2", "--mu", "1.5", "--p-min", "-6", "--p-max", "8", "--repr", repr]);
        assert_eq!(o.status.code(), Some(0));
        json(&o)["records"].as_array().unwrap().clone()
    };
    let (rec, closed) = (run("recurrence"), run("traditional"));
    let mut compared = 0;
    for (r, c) in rec.iter().zip(&closed) {
        assert_eq!(r["p"], c["p"]);
        if let (Some(x), Some(y)) = (r["A"].as_f64(), c["A"].as_f64()) {
            assert!((x - y).abs() < 1e-9 * y, "p={}", r["p"]);
            compared += 1;
        }
    }
    assert!(compared >= 12);
    assert!(rec.iter().any(|r| r["p"] == -2 && r["skip"].is_string()));
}

#[test]
fn compute_high_precision() {
    let args = ["compute", "--kappa", "-2", "--n", "3", "--mu", "1.2", "--p-min", "0", "--p-max", "6", "--precision", "high"];
    let o = rcm(&args);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["summary"]["precision"], "high");
    let env = Command::new(env!("CARGO_BIN_EXE_rcm"))
        .args(&args[..args.len() - 2])
        .env("RCM_PRECISION", "high")
        .output()
        .unwrap();
    assert_eq!(json(&env)["summary"]["precision"], "high");
    let bad = Command::new(env!("CARGO_BIN_EXE_rcm"))
        .args(&args[..args.len() - 2])
        .env("RCM_PRECISION", "quad")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_default_passes() {
    let o = rcm(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["summary"]["pass"], true);
    assert_eq!(v["environment"]["generator"], "ChaCha8Rng");
    assert!(v["families"].as_array().unwrap().len() >= 25);
}

#[test]
fn verify_seeded_draws_are_deterministic() {
    let a = rcm(&["verify", "--seed", "7", "--draws", "10"]);
    let b = rcm(&["verify", "--seed", "7", "--draws", "10"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let draws = v["records"].as_array().unwrap().iter().filter(|r| r["family"] == "appendix_b").count();
    assert_eq!(draws, 10);
    assert_eq!(v["environment"]["seed"], 7);
}

#[test]
fn verify_grid_files() {
    let dir = std::env::temp_dir().join(format!("rcm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::File::create(&bad).unwrap().write_all(b"{\"kappa_values\": [0]}").unwrap();
    assert_eq!(rcm(&["verify", "--grid", bad.to_str().unwrap()]).status.code(), Some(2));
    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(rcm(&["verify", "--grid", garbage.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(rcm(&["verify", "--grid", dir.join("missing.json").to_str().unwrap()]).status.code(), Some(2));

    let empty = dir.join("empty.json");
    std::fs::write(&empty, r#"{"p_range": {"min": 1, "max": 0}}"#).unwrap();
    let o = rcm(&["verify", "--grid", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["records"].as_array().unwrap().len(), 0);

    // a loose tolerance override is honoured, a zero one makes the run fail
    let strict = dir.join("strict.json");
    std::fs::write(
        &strict,
        r#"{"kappa_values": [-2], "n_values": [1], "mu_fractions": [0.5], "tolerances": {"det_s": 0.0}}"#,
    )
    .unwrap();
    let o = rcm(&["verify", "--grid", strict.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("det_s"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identities_counts_and_formats() {
    let o = rcm(&["identities", "--n-max", "2", "--p-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["records"].as_array().unwrap().len(), 4 * 2 * 5 * 2);
    assert_eq!(v["summary"]["failed"], 0);
    let o = rcm(&["identities", "--n-max", "3", "--p-max", "2", "--nu", "0.5,2", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("identity,n,nu,p,lhs,rhs,residual,verdict"));
    assert_eq!(text.lines().count(), 1 + 4 * 3 * 2 * 2);
}

#[test]
fn identities_default_run_passes() {
    let o = rcm(&["identities"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["summary"]["max_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn identities_rejects_nonpositive_nu() {
    for nu in ["-1", "0", "1,-2"] {
        let o = rcm(&["identities", "--nu", nu]);
        assert_eq!(o.status.code(), Some(2), "{nu}");
        assert!(stdout(&o).is_empty());
    }
}
