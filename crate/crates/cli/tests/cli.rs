use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use apev_discretization::csv::Table;

fn apev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apev")).args(args).output().expect("spawn apev")
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.in");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str = "N1 = 8\nN2 = 8\nN3 = 17\nT = 0.2\noutput_every = 2\nwindow = 5\n";

#[test]
fn configuration_errors_exit_with_code_2_and_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    for (body, needle) in [
        ("N1 = 8\nm0 = 0\n", "m0"),
        ("N1 = 8\nN1 = 16\n", "line 2"),
        ("N3 = x\n", "line 1"),
        ("window = 4\n", "window"),
    ] {
        let cfg = write_config(dir.path(), body);
        let o = apev(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{body}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(needle), "{body}");
    }
    let o = apev(&["run", "--config", dir.path().join("absent").to_str().unwrap(), "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert!(apev(&["run", "--config", &cfg, "--out", d.to_str().unwrap()]).status.success());
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 10);
    for n in names {
        let pa = a.join(&n);
        if pa.is_file() {
            assert_eq!(fs::read(&pa).unwrap(), fs::read(b.join(&n)).unwrap(), "{n:?}");
        }
    }
}

#[test]
fn steady_run_reports_vanishing_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{SMALL}family = steady\n"));
    let run = dir.path().join("run");
    let o = apev(&["run", "--config", &cfg, "--out", run.to_str().unwrap()]);
    assert!(o.status.success());
    for k in ["momentum", "plate", "plateW", "density"] {
        let t = Table::read(&run.join(format!("ledger_{k}.csv"))).unwrap();
        let res = t.column("identity_residual").unwrap();
        assert!(!res.is_empty());
        assert!(res.iter().all(|x| x.abs() <= 1e-10), "{k}: {res:?}");
    }
    let o = apev(&["report", "--dir", run.to_str().unwrap()]);
    assert!(o.status.success());
    let summary = fs::read_to_string(run.join("summary.txt")).unwrap();
    assert!(summary.contains("status: completed"));
    for f in ["norms.svg", "ledger.svg"] {
        assert!(fs::read_to_string(run.join(f)).unwrap().starts_with("<svg"));
    }
}

#[test]
fn enforcement_trip_exits_with_code_3_and_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{SMALL}enforcement_tol = 1e-40\n"));
    let run = dir.path().join("run");
    let o = apev(&["run", "--config", &cfg, "--out", run.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let status = fs::read_to_string(run.join("status.txt")).unwrap();
    assert!(status.contains("status = tripped") && status.contains("kinematic"), "{status}");
    assert!(apev(&["report", "--dir", run.to_str().unwrap()]).status.success());
    assert!(fs::read_to_string(run.join("summary.txt")).unwrap().contains("monitors: kinematic"));
}

#[test]
fn diagnose_initdata_and_norms_write_their_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (run, diag, init) = (dir.path().join("run"), dir.path().join("diag"), dir.path().join("init"));
    assert!(apev(&["run", "--config", &cfg, "--out", run.to_str().unwrap()]).status.success());
    assert!(apev(&["diagnose", "--traj", run.to_str().unwrap(), "--out", diag.to_str().unwrap()]).status.success());
    let snaps = fs::read_dir(run.join("snapshots")).unwrap().count();
    assert_eq!(Table::read(&diag.join("monitors.csv")).unwrap().rows.len(), snaps);

    assert!(apev(&["initdata", "--config", &cfg, "--out", init.to_str().unwrap()]).status.success());
    let jet = Table::read(&init.join("jet.csv")).unwrap();
    assert!(jet.column("E0").unwrap()[0] > 0.0);
    let o = apev(&["norms", "--snapshot", init.join("initial.apev").to_str().unwrap()]);
    assert!(o.status.success());
    let t = Table::parse(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 4);
    assert!(t.column("R").is_some() && t.column("w_t").is_some());
}

#[test]
fn missing_snapshot_is_an_io_error() {
    let o = apev(&["norms", "--snapshot", "/nonexistent/x.apev"]);
    assert_eq!(o.status.code(), Some(5));
}
