use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn inls(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inls"))
        .args(args)
        .current_dir(dir)
        .env("INLS_CACHE_DIR", dir.join("cache"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const BASE: &str = "\
physics.N = 2
physics.b = 0.5
physics.alpha = 2
grid.r_max = 40
grid.points = 1024
";

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn summary(dir: &Path, out: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(out).join("summary.json")).unwrap()).unwrap()
}

#[test]
fn exponents_prints_flat_json() {
    let tmp = tempfile::tempdir().unwrap();
    let o = inls(
        tmp.path(),
        &["exponents", "--N", "2", "--b", "0.5", "--alpha", "2"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m = v.as_object().unwrap();
    assert!(m.values().all(|x| !x.is_object() && !x.is_array()));
    assert_eq!(m["gamma_c"], 0.25);
    assert_eq!(m["sigma_c"], 3.0);
    assert_eq!(m["two_star"], "inf");
    assert_eq!(m["lemma31_feasible"], true);
    assert_eq!(m["appendix_feasible"], false);

    let o = inls(
        tmp.path(),
        &["exponents", "--N", "3", "--b", "0.5", "--alpha", "1.5"],
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["appendix_feasible"], true);
    assert!(v["appendix_ball_a1"].as_f64().unwrap() > 0.0);

    let o = inls(
        tmp.path(),
        &["exponents", "--N", "2", "--b=-1", "--alpha", "2"],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn groundstate_writes_csv_and_sidecar() {
    let tmp = tempfile::tempdir().unwrap();
    let o = inls(
        tmp.path(),
        &[
            "groundstate",
            "--N",
            "2",
            "--b",
            "0.5",
            "--alpha",
            "2",
            "--points",
            "1024",
            "--out",
            "q.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(tmp.path().join("q.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(lines.next().unwrap(), "r,Q");
    assert_eq!(lines.count(), 1024);
    let side: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("q.json")).unwrap()).unwrap();
    assert!(side["massQ"].as_f64().unwrap() > 0.0);
    assert!(tmp.path().join("cache/gs_N2_b0.5_alpha2.csv").exists());
}

#[test]
fn run_writes_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "def.cfg",
        &format!("{BASE}physics.sign = defocusing\ntime.t_final = 2\noutput.directory = out\n"),
    );
    let o = inls(tmp.path(), &["run", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = summary(tmp.path(), "out");
    for key in [
        "verdict",
        "threshold",
        "morawetz",
        "scattering",
        "virial",
        "interaction_l4",
    ] {
        assert!(s.get(key).is_some(), "missing {key}");
    }
    let series = fs::read_to_string(tmp.path().join("out/series.csv")).unwrap();
    let header = series.lines().next().unwrap();
    for col in [
        "mass",
        "energy",
        "virial_M",
        "virial_rhs",
        "morawetz_A",
        "morawetz_B",
        "threshold_lhs",
    ] {
        assert!(header.split(',').any(|c| c == col), "missing column {col}");
    }
    let snaps: Vec<_> = fs::read_dir(tmp.path().join("out/snapshots"))
        .unwrap()
        .collect();
    assert_eq!(snaps.len(), 3);

    // restart from the last snapshot
    let mut last = snaps
        .into_iter()
        .map(|e| e.unwrap().path())
        .collect::<Vec<_>>();
    last.sort();
    let cfg = write_config(
        tmp.path(),
        "file.cfg",
        &format!(
            "{BASE}physics.sign = defocusing\ntime.t_final = 1\ninitial.kind = file\ninitial.path = {}\noutput.directory = out2\n",
            last.last().unwrap().display()
        ),
    );
    let o = inls(tmp.path(), &["run", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn run_reports_blowup_as_result() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "blow.cfg",
        &format!(
            "{BASE}physics.sign = focusing\ntime.t_final = 2\ninitial.kind = ground_state_multiple\ninitial.multiple = 1.3\noutput.directory = out\n"
        ),
    );
    let o = inls(tmp.path(), &["run", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = summary(tmp.path(), "out");
    assert_eq!(s["verdict"], "blew_up");
    assert_eq!(s["outcome"], "blowup_detected");
}

#[test]
fn config_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.cfg",
        "physics.N = 2\nphysics.b = 1.5\nphysics.alpha = 2\nphysics.sign = defocusing\nphysics.scope = 2d\ngrid.r_max = 20\ngrid.points = 128\ntime.t_final = 1\n",
    );
    let o = inls(tmp.path(), &["run", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("b out of range"), "{}", stderr(&o));

    let cfg = write_config(
        tmp.path(),
        "typo.cfg",
        &format!("{BASE}physics.sign = defocusing\ntime.t_final = 1\ngrid.pionts = 3\n"),
    );
    let o = inls(tmp.path(), &["run", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("grid.pionts"), "{}", stderr(&o));

    let o = inls(tmp.path(), &["run", "missing.cfg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_is_complete_and_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let body = |workers: usize| {
        format!(
            "{BASE}physics.sign = focusing\ntime.t_final = 4\ninitial.kind = ground_state_multiple\noutput.directory = sw\nsweep.b = 0.4, 0.5\nsweep.amplitude = 0.5, 1.3\nsweep.workers = {workers}\n"
        )
    };
    let cfg = write_config(tmp.path(), "sweep.cfg", &body(3));
    let o = inls(tmp.path(), &["sweep", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = fs::read_to_string(tmp.path().join("sw/sweep.csv")).unwrap();
    let rows: Vec<Vec<&str>> = first
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let amp: f64 = row[2].parse().unwrap();
        if amp < 1.0 {
            assert!(row[3] == "scattered" || row[3] == "undecided", "{row:?}");
        } else {
            assert_eq!(row[3], "blew_up");
        }
    }

    let cfg = write_config(tmp.path(), "sweep.cfg", &body(1));
    let o = inls(tmp.path(), &["sweep", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let second = fs::read_to_string(tmp.path().join("sw/sweep.csv")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn check_passes_and_detects_tampering() {
    let tmp = tempfile::tempdir().unwrap();
    // empty cache: profiles are solved on demand
    let o = inls(tmp.path(), &["check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = inls(tmp.path(), &["check", "--tamper-phi"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let line = out
        .lines()
        .find(|l| l.contains("weight_constraints"))
        .unwrap();
    assert!(line.starts_with("FAIL"), "{line}");
    assert_eq!(out.matches("FAIL").count(), 1);
}
