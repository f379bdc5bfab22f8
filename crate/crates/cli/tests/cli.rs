use std::path::Path;
use std::process::{Command, Output};

use rwinv_cli::record::RunRecord;

fn rwinv(store: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rwinv"))
        .args(args)
        .env("RWINV_STORE", store)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn records(store: &Path) -> Vec<RunRecord> {
    rwinv_cli::store::Store::new(store).load_all().unwrap()
}

#[test]
fn invariance_run_at_forty_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("run.json");
    let o = rwinv(
        dir.path(),
        &["exact-lamplighter", "--lamp-order", "2", "--n", "40", "--mode", "rational", "--check-invariance", "--json", json.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rec: RunRecord = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(rec.payload.violations, 0);
    let inv = &rec.payload.details["runs"][0]["invariance"][0];
    assert!(inv["violations"].as_array().unwrap().is_empty());
    assert!(inv["checked"].as_u64().unwrap() > 0);
    assert!(stdout(&o).contains("invariance_violations:(0)[0:#1],40,0.0,,rational"));
}

#[test]
fn literal_gate_violation_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = rwinv(dir.path(), &["exact-lamplighter", "--n", "8", "--increments", "(0)[1:#1]", "--check-invariance"]);
    assert_eq!(o.status.code(), Some(1));
    let o = rwinv(
        dir.path(),
        &["exact-lamplighter", "--n", "8", "--increments", "(0)[1:#1]", "--check-invariance", "--gate", "interior"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn time_zero_is_a_point_mass() {
    let dir = tempfile::tempdir().unwrap();
    let o = rwinv(dir.path(), &["exact-lamplighter", "--n", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("identity_probability,0,1.0,,rational"));
    assert!(out.contains("entropy,0,0.0,,rational"));
}

#[test]
fn rational_cap_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = rwinv(dir.path(), &["exact-lamplighter", "--n", "10000", "--mode", "rational"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cap is 400"), "{}", stderr(&o));
    assert!(records(dir.path()).is_empty());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "n = 10\nshade = blue\n").unwrap();
    for args in [
        vec!["exact-lamplighter", "--config", cfg.to_str().unwrap()],
        vec!["drift", "--lamp-order", "2"],
        vec!["exact-lamplighter", "--n", "ten"],
        vec!["exact-lamplighter", "--increments", "(0)[1:#7]", "--tv-shift"],
        vec!["invariance", "--group", "free:2"],
        vec!["frobnicate"],
    ] {
        let o = rwinv(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn config_file_and_rerun_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    let cfg = dir.path().join("drift.conf");
    std::fs::write(&cfg, "# small drift run\ncommand = drift\ngroup = lamplighter:2\nn = 16,64\nsamples = 200\nseed = 3\n").unwrap();
    let a = rwinv(&store, &["drift", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let b = rwinv(&store, &["drift", "--config", cfg.to_str().unwrap()]);
    assert_eq!(stdout(&a), stdout(&b));
    let recs = records(&store);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].config.get("samples"), Some("200"));
    // a flag overrides the file and changes the hash
    let c = rwinv(&store, &["drift", "--config", cfg.to_str().unwrap(), "--seed", "4"]);
    assert_eq!(c.status.code(), Some(0));
    let recs = records(&store);
    assert_eq!(recs.len(), 2);
    assert_ne!(recs[0].config_hash, recs[1].config_hash);
    // the stored config reproduces the run
    let again = rwinv_cli::config::RunConfig::from_kv(&recs[0].config.to_kv()).unwrap();
    assert_eq!(again.hash(), recs[0].config_hash);
}

#[test]
fn csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let o = rwinv(dir.path(), &["free", "--n", "6,7", "--mode", "rational", "--word", "1,-2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("metric,n,value,stderr,mode"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5, "{line}");
        let v: f64 = cols[2].parse().unwrap();
        assert!(v.is_finite());
    }
    // P[X_6 = e] on F_2: 232 closed walks out of 4^6
    assert!(text.contains(&format!("identity_probability,6,{:?},,rational", 29.0 / 512.0)));
}

#[test]
fn estimator_commands_run() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["cover", "--n", "100,400", "--samples", "50", "--increments", "(0,0)[(0,0):#1];(1,0)[]"],
        vec!["invariance", "--group", "zwrz", "--n", "1024", "--samples", "100"],
        vec!["invariance", "--group", "z2f:2", "--n", "200", "--samples", "100"],
        vec!["invariance", "--group", "z:2", "--n", "400"],
        vec!["drift", "--group", "inner:1", "--n", "64,256", "--samples", "100"],
        vec!["drift", "--group", "free:2", "--n", "64,256", "--samples", "100"],
    ] {
        let o = rwinv(dir.path(), &args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).lines().count() > 1, "{args:?}");
    }
    assert_eq!(records(dir.path()).len(), 6);
}

#[test]
fn report_without_runs_warns() {
    let dir = tempfile::tempdir().unwrap();
    let o = rwinv(dir.path(), &["report"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("warning: no stored runs"));
}

#[test]
fn report_fits_radius_over_three_runs() {
    let dir = tempfile::tempdir().unwrap();
    for n in ["100", "400", "1600"] {
        let o = rwinv(
            dir.path(),
            &["exact-lamplighter", "--n", n, "--mode", "float", "--radius-profile", "--constancy-profile", "--epsilon", "0.5", "--samples", "512", "--seed", "1"],
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let csv = dir.path().join("report.csv");
    let o = rwinv(dir.path(), &["report", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("fitted c ="), "{text}");
    assert!(text.contains("almost-invariance radius grows like c√n"), "{text}");
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.contains("c_fit[q=2,eps=0.5]"));
    let rec = records(dir.path()).into_iter().find(|r| r.config.command == rwinv_cli::config::Command::Report).unwrap();
    // every source of the report is a stored record
    let hashes: Vec<String> = records(dir.path()).iter().map(|r| r.config_hash.clone()).collect();
    for h in rec.payload.details["records"].as_array().unwrap() {
        assert!(hashes.contains(&h.as_str().unwrap().to_string()));
    }
    assert_eq!(rec.payload.details["records"].as_array().unwrap().len(), 3);
}
