use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn latinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latinlab")).args(args).env_remove("LATINLAB_THREADS").output().unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("latinlab-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn read(dir: &Path, file: &str) -> Vec<u8> {
    fs::read(dir.join(file)).unwrap()
}

#[test]
fn same_spec_gives_identical_bytes() {
    let (a, b) = (tmp("det-a"), tmp("det-b"));
    let args = ["experiment", "run", "intercalate-mean", "--n", "6", "--samples", "40", "--seed", "9"];
    let ra = latinlab(&[&args[..], &["--out", a.to_str().unwrap(), "--threads", "1"]].concat());
    let rb = latinlab(&[&args[..], &["--out", b.to_str().unwrap(), "--threads", "3"]].concat());
    assert_eq!(ra.status.code(), Some(0), "{}", String::from_utf8_lossy(&ra.stderr));
    assert_eq!(rb.status.code(), Some(0));
    for f in ["intercalate-mean.csv", "intercalate-mean.json"] {
        assert_eq!(read(&a, f), read(&b, f), "{f}");
    }
    let other = tmp("det-c");
    latinlab(&["experiment", "run", "intercalate-mean", "--n", "6", "--samples", "40", "--seed", "10", "--out", other.to_str().unwrap()]);
    assert_ne!(read(&a, "intercalate-mean.csv"), read(&other, "intercalate-mean.csv"));
}

#[test]
fn summary_echo_reproduces_the_run() {
    let a = tmp("echo-a");
    latinlab(&["experiment", "run", "rectangle-poisson", "--n", "12", "--samples", "50", "--seed", "2", "--out", a.to_str().unwrap()]);
    let summary: serde_json::Value = serde_json::from_slice(&read(&a, "rectangle-poisson.json")).unwrap();
    assert_eq!(summary["schema"], 1);
    assert_eq!(summary["experiment"], "rectangle-poisson");
    assert_eq!(summary["spec"]["k"], 3);
    let spec = a.join("spec.json");
    fs::write(&spec, summary["spec"].to_string()).unwrap();
    let b = tmp("echo-b");
    latinlab(&["experiment", "run", "rectangle-poisson", "--spec", spec.to_str().unwrap(), "--seed", "2", "--out", b.to_str().unwrap()]);
    assert_eq!(read(&a, "rectangle-poisson.json"), read(&b, "rectangle-poisson.json"));
    assert_eq!(read(&a, "rectangle-poisson.csv"), read(&b, "rectangle-poisson.csv"));
}

#[test]
fn unknown_experiment_is_a_usage_error() {
    let r = latinlab(&["experiment", "run", "no-such-experiment"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("unknown experiment id"));
    assert_eq!(latinlab(&["count", "--bogus"]).status.code(), Some(2));
}

#[test]
fn report_rows_and_exit_codes() {
    let pass = tmp("report-pass");
    let r = latinlab(&["experiment", "run", "phi-table", "--max-cells", "6", "--max-target", "4", "--out", pass.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let r = latinlab(&["report", pass.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.lines().count() >= 5 && text.lines().all(|l| l.starts_with("PASS")), "{text}");

    // at n = 4 and 6 the ratio moves away from 4, so the trend row fails
    let fail = tmp("report-fail");
    let r = latinlab(&["experiment", "run", "cuboctahedra-scan", "--sizes", "4,6", "--samples", "10", "--out", fail.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    let r = latinlab(&["report", fail.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    let text = String::from_utf8(r.stdout).unwrap();
    let row = text.lines().find(|l| l.contains("trend_towards_4")).unwrap();
    assert!(row.starts_with("FAIL") && row.contains("observed") && row.contains("target"), "{row}");

    assert_eq!(latinlab(&["report", tmp("report-empty").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn count_reads_core_formats() {
    let d = tmp("count");
    let sq = d.join("z3.txt");
    fs::write(&sq, "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
    let r = latinlab(&["count", "cuboctahedra", sq.to_str().unwrap()]);
    let text = String::from_utf8(r.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("input,metric,value"));
    assert!(text.contains(",cuboctahedra,243\n"), "{text}");
    let r = latinlab(&["count", "girth", sq.to_str().unwrap()]);
    assert!(String::from_utf8(r.stdout).unwrap().ends_with(",girth,>6\n"));

    let samples = d.join("samples.txt");
    let r = latinlab(&["sample", "square", "--n", "4", "--count", "3", "--seed", "5", "--out", samples.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let r = latinlab(&["count", "intercalates", samples.to_str().unwrap()]);
    let text = String::from_utf8(r.stdout).unwrap();
    assert_eq!(text.lines().count(), 4, "{text}");

    let bad = d.join("bad.txt");
    fs::write(&bad, "2\n0 0\n1 1\n").unwrap();
    assert_eq!(latinlab(&["count", "intercalates", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn absorb_and_process_verbs() {
    let r = latinlab(&["absorb", "spheres", "--g", "4"]);
    assert_eq!(r.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["out"].as_array().unwrap().len(), 7);
    assert_eq!(v["in"].as_array().unwrap().len(), 8);
    assert_eq!(v["verified"], true);

    let r = latinlab(&["absorb", "gadget", "--len", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["aux"], 3);

    let d = tmp("process");
    let r = latinlab(&["process", "run", "--n", "12", "--g", "6", "--seed", "3", "--out", d.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let csv = String::from_utf8(read(&d, "trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,available,chosen\n"));
    let r = latinlab(&["count", "intercalates", d.join("system.txt").to_str().unwrap()]);
    assert!(String::from_utf8(r.stdout).unwrap().ends_with(",intercalates,0\n"));
}
